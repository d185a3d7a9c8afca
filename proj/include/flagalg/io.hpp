#pragma once

// JSON forms of structure constants, flag algebra elements, posets and
// reconstruction reports. Scalars are always exact strings.

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "flagalg/errors.hpp"
#include "flagalg/flag_algebra.hpp"
#include "flagalg/poset.hpp"
#include "flagalg/reconstruction.hpp"
#include "flagalg/structure_constants.hpp"

namespace flagalg {

using Json = nlohmann::ordered_json;

namespace detail {

template <class Ring>
typename Ring::value_type scalar_from_json(const Ring& ring, const Json& j) {
  if (j.is_string()) return ring.parse(j.get<std::string>());
  if (j.is_number_integer()) return ring.from_int(j.get<long long>());
  throw ParseError("scalar must be a string or an integer, got " + j.dump());
}

inline std::size_t index_from_json(const Json& j, std::size_t bound, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ParseError(std::string(what) + " must be a nonnegative integer, got " + j.dump());
  }
  auto v = j.get<std::size_t>();
  if (v >= bound) throw ParseError(std::string(what) + " " + std::to_string(v) + " out of range");
  return v;
}

}  // namespace detail

template <class Ring>
Json vector_to_json(const Ring& ring, const Vec<Ring>& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(ring.to_string(c));
  return out;
}

/// {"dim": d, "ring": "<spec>", "table": [[i, j, [[k, "<scalar>"], ...]], ...]};
/// pairs with zero product are omitted.
template <class Ring>
Json table_to_json(const StructureConstants<Ring>& table) {
  const auto& ring = table.ring();
  Json entries = Json::array();
  for (std::size_t i = 0; i < table.dim(); ++i) {
    for (std::size_t j = 0; j < table.dim(); ++j) {
      const auto& prod = table.product(i, j);
      if (prod.empty()) continue;
      Json terms = Json::array();
      for (const auto& t : prod) terms.push_back(Json::array({t.index, ring.to_string(t.coeff)}));
      entries.push_back(Json::array({i, j, std::move(terms)}));
    }
  }
  return Json{{"dim", table.dim()}, {"ring", ring.name()}, {"table", std::move(entries)}};
}

/// The "ring" field is informational here; the caller picks the ring.
template <class Ring>
StructureConstants<Ring> table_from_json(const Json& j, const Ring& ring) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("table")) {
    throw ParseError("structure constants JSON needs \"dim\" and \"table\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 0) throw ParseError("\"dim\" must be a nonnegative integer");
  const auto d = j["dim"].get<std::size_t>();
  if (!j["table"].is_array()) throw ParseError("\"table\" must be an array");
  StructureConstants<Ring> out(ring, d);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : j["table"]) {
    if (!e.is_array() || e.size() != 3 || !e[2].is_array()) throw ParseError("table entry must be [i, j, [[k, c], ...]]: " + e.dump());
    const auto i = detail::index_from_json(e[0], d, "basis index");
    const auto k = detail::index_from_json(e[1], d, "basis index");
    if (!seen.insert({i, k}).second) throw ParseError("duplicate table entry for pair " + e[0].dump() + ", " + e[1].dump());
    Vec<Ring> v = zero_vector(ring, d);
    std::set<std::size_t> targets;
    for (const auto& term : e[2]) {
      if (!term.is_array() || term.size() != 2) throw ParseError("product term must be [k, c]: " + term.dump());
      const auto t = detail::index_from_json(term[0], d, "basis index");
      if (!targets.insert(t).second) throw ParseError("repeated basis index in product " + e.dump());
      v[t] = detail::scalar_from_json(ring, term[1]);
    }
    out.set_product(i, k, v);
  }
  return out;
}

/// [[["a", "a", "b"], "<scalar>"], ...] using element names.
template <class Ring>
Json element_to_json(const FlagElement<Ring>& f) {
  const auto& ctx = f.context();
  Json out = Json::array();
  for (const auto& t : f.terms()) {
    Json tuple = Json::array();
    for (auto x : ctx.tuple(t.index).entries) tuple.push_back(ctx.poset().name(x));
    out.push_back(Json::array({std::move(tuple), f.ring().to_string(t.coeff)}));
  }
  return out;
}

template <class Ring>
FlagElement<Ring> element_from_json(const ContextPtr<Ring>& ctx, const Json& j) {
  if (!j.is_array()) throw ParseError("element must be an array of [[names...], scalar] pairs");
  FlagElement<Ring> f(ctx);
  const auto& ring = ctx->ring();
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array()) {
      throw ParseError("element term must be [[names...], scalar]: " + term.dump());
    }
    std::vector<Element> tuple;
    for (const auto& name : term[0]) {
      if (!name.is_string()) throw ParseError("element names must be strings: " + name.dump());
      auto x = ctx->poset().find(name.get<std::string>());
      if (!x) throw ParseError("unknown element '" + name.get<std::string>() + "'");
      tuple.push_back(*x);
    }
    auto idx = ctx->index_of(MultiChain{tuple});
    if (!idx) throw ParseError("not a multichain of length " + std::to_string(ctx->order()) + ": " + term[0].dump());
    f.set(*idx, ring.add(f.coefficient(*idx), detail::scalar_from_json(ring, term[1])));
  }
  return f;
}

inline Json poset_to_json(const Poset& p) {
  Json elements = Json::array(), covers = Json::array();
  for (Element x = 0; x < p.size(); ++x) elements.push_back(p.name(x));
  for (auto [x, y] : p.covers()) covers.push_back(Json::array({p.name(x), p.name(y)}));
  return Json{{"elements", std::move(elements)}, {"covers", std::move(covers)}};
}

template <class Ring>
Json reconstruction_to_json(const Ring& ring, const Reconstruction<Ring>& r) {
  Json covers = Json::array(), elem = Json::array(), cov = Json::array();
  for (auto [x, y] : r.edges) covers.push_back(Json::array({x, y}));
  for (const auto& e : r.element_idempotents) elem.push_back(vector_to_json(ring, e));
  for (const auto& f : r.cover_idempotents) cov.push_back(vector_to_json(ring, f));
  return Json{{"ring", ring.name()},
              {"elements", r.poset.size()},
              {"covers", std::move(covers)},
              {"ranks",
               {{"dim", r.ranks.dim},
                {"c1", r.ranks.c1},
                {"c2", r.ranks.c2},
                {"c3", r.ranks.c3},
                {"element_idempotents", r.ranks.elements},
                {"cover_idempotents", r.ranks.covers}}},
              {"element_idempotents", std::move(elem)},
              {"cover_idempotents", std::move(cov)}};
}

}  // namespace flagalg
