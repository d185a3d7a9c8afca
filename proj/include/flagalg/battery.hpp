#pragma once

// The per-poset theorem battery behind `flagalg check`: every structural
// statement is evaluated by exact computation and reported as JSON.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "flagalg/derivations.hpp"
#include "flagalg/errors.hpp"
#include "flagalg/flag_algebra.hpp"
#include "flagalg/io.hpp"
#include "flagalg/poset.hpp"
#include "flagalg/reconstruction.hpp"
#include "flagalg/submodule_lattice.hpp"

namespace flagalg {

inline constexpr const char* kVersion = "1.0.0";

enum class Status { pass, fail, skipped, unsupported };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    case Status::unsupported: return "unsupported";
  }
  return "?";
}

struct TheoremResult {
  std::string id;
  Status status = Status::pass;
  Json detail;
  double wall_ms = 0;
};

struct PosetReport {
  Poset poset;
  std::vector<TheoremResult> results;
};

struct BatteryOptions {
  std::uint64_t seed = 0;
  bool timings = false;
};

/// Theorem ids in report order.
inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "flag.closed_form_product",       "flag.bilinearity",
      "flag.power_associativity",       "flag.no_one_sided_identity",
      "flag.classical_n2",              "flag.filtration_products",
      "lattice.ideals",                 "lattice.commutator_is_J1",
      "lattice.z2_span_formula",        "lattice.z2_subalgebra",
      "lattice.z3_is_J2",               "lattice.idempotents_elements",
      "lattice.idempotents_covers",     "reconstruction.canonical",
      "reconstruction.round_trip",      "reconstruction.induced_automorphisms",
      "derivations.n3_trivial",         "derivations.n2_contrast",
  };
  return ids;
}

namespace detail {

struct Outcome {
  Status status;
  Json detail;
};

inline Outcome pass(Json detail = Json::object()) { return {Status::pass, std::move(detail)}; }
inline Outcome fail(Json detail) { return {Status::fail, std::move(detail)}; }
inline Outcome skipped(const std::string& why) { return {Status::skipped, Json{{"reason", why}}}; }

inline Json tuple_json(const Poset& p, const MultiChain& t) {
  Json out = Json::array();
  for (auto x : t.entries) out.push_back(p.name(x));
  return out;
}

inline Json bijection_json(const Poset& p, const Bijection& phi) {
  Json out = Json::object();
  for (Element x = 0; x < p.size(); ++x) out[p.name(x)] = phi[x];
  return out;
}

template <class Ring>
FlagElement<Ring> random_element(const ContextPtr<Ring>& ctx, std::mt19937_64& rng, std::size_t min_length = 0) {
  FlagElement<Ring> f(ctx);
  for (std::size_t i = 0; i < ctx->dim(); ++i) {
    if (ctx->span_length(i) >= min_length) f.set(i, ctx->ring().sample(rng));
  }
  return f;
}

template <class Ring>
bool in_J(const FlagElement<Ring>& f, std::size_t k) {
  return std::all_of(f.terms().begin(), f.terms().end(),
                     [&](const auto& t) { return f.context().span_length(t.index) >= k; });
}

template <class Ring>
class Battery {
 public:
  Battery(const Poset& p, const Ring& ring, const BatteryOptions& opt)
      : poset_(p), ring_(ring), opt_(opt),
        ctx3_(AlgebraContext<Ring>::make(p, 3, ring)), ctx2_(AlgebraContext<Ring>::make(p, 2, ring)) {}

  PosetReport run() {
    PosetReport report{poset_, {}};
    const std::map<std::string, std::function<Outcome()>> checks = {
        {"flag.closed_form_product", [&] { return closed_form_product(); }},
        {"flag.bilinearity", [&] { return bilinearity(); }},
        {"flag.power_associativity", [&] { return power_associativity(); }},
        {"flag.no_one_sided_identity", [&] { return no_one_sided_identity(); }},
        {"flag.classical_n2", [&] { return classical_n2(); }},
        {"flag.filtration_products", [&] { return filtration_products(); }},
        {"lattice.ideals", [&] { return ideals(); }},
        {"lattice.commutator_is_J1", [&] { return commutator_is_j1(); }},
        {"lattice.z2_span_formula", [&] { return z2_span_formula(); }},
        {"lattice.z2_subalgebra", [&] { return z2_subalgebra(); }},
        {"lattice.z3_is_J2", [&] { return z3_is_j2(); }},
        {"lattice.idempotents_elements", [&] { return idempotents_elements(); }},
        {"lattice.idempotents_covers", [&] { return idempotents_covers(); }},
        {"reconstruction.canonical", [&] { return reconstruction_canonical(); }},
        {"reconstruction.round_trip", [&] { return round_trip(); }},
        {"reconstruction.induced_automorphisms", [&] { return induced_automorphisms(); }},
        {"derivations.n3_trivial", [&] { return derivations_n3(); }},
        {"derivations.n2_contrast", [&] { return derivations_n2(); }},
    };
    for (const auto& id : theorem_ids()) {
      const auto start = std::chrono::steady_clock::now();
      Outcome o;
      try {
        o = checks.at(id)();
      } catch (const CapabilityError& e) {
        o = {Status::unsupported, Json{{"error", e.what()}}};
      } catch (const Error& e) {
        o = fail(Json{{"error", e.what()}});
      }
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      report.results.push_back({id, o.status, std::move(o.detail), ms});
    }
    return report;
  }

 private:
  using Sub = AlgebraSubmodule<Ring>;

  const CommutatorChain<Ring>& chain() {
    if (!chain_) chain_ = z_chain(ctx3_);
    return *chain_;
  }

  Sub whole() const { return Sub::whole(table_of(ctx3_)); }

  Outcome closed_form_product() {
    std::size_t pairs = 0;
    for (const auto& ctx : {ctx2_, ctx3_}) {
      for (std::size_t i = 0; i < ctx->dim(); ++i) {
        for (std::size_t j = 0; j < ctx->dim(); ++j, ++pairs) {
          auto closed = basis_product(ctx, ctx->tuple(i), ctx->tuple(j));
          auto conv = convolve(basis_element(ctx, i), basis_element(ctx, j));
          if (!(closed == conv)) {
            return fail(Json{{"n", ctx->order()},
                             {"left", tuple_json(poset_, ctx->tuple(i))},
                             {"right", tuple_json(poset_, ctx->tuple(j))},
                             {"closed_form", element_to_json(closed)},
                             {"convolution", element_to_json(conv)}});
          }
        }
      }
    }
    return pass(Json{{"pairs", pairs}});
  }

  Outcome bilinearity() {
    std::mt19937_64 rng(opt_.seed);
    for (int trial = 0; trial < 8; ++trial) {
      auto f = random_element(ctx3_, rng), g = random_element(ctx3_, rng), h = random_element(ctx3_, rng);
      const auto a = ring_.sample(rng), b = ring_.sample(rng);
      auto comb = f.scaled(a) + g.scaled(b);
      const bool left = convolve(comb, h) == convolve(f, h).scaled(a) + convolve(g, h).scaled(b);
      const bool right = convolve(h, comb) == convolve(h, f).scaled(a) + convolve(h, g).scaled(b);
      if (!left || !right) {
        return fail(Json{{"f", element_to_json(f)}, {"g", element_to_json(g)}, {"h", element_to_json(h)},
                         {"a", ring_.to_string(a)}, {"b", ring_.to_string(b)}, {"failing_side", left ? "right" : "left"}});
      }
    }
    return pass(Json{{"trials", 8}});
  }

  Outcome power_associativity() {
    auto w = power_assoc_witness(ctx3_);
    if (poset_.is_antichain()) {
      if (w) return fail(Json{{"error", "witness produced for an antichain"}});
      if (auto bad = associativity_counterexample(ctx3_->structure_constants())) {
        return fail(Json{{"non_associative_triple", Json::array({(*bad)[0], (*bad)[1], (*bad)[2]})}});
      }
      return pass(Json{{"antichain", true}, {"associative", true}});
    }
    if (!w) return fail(Json{{"error", "no witness for a non-antichain"}});
    return pass(Json{{"x", poset_.name(w->lower)},
                     {"y", poset_.name(w->upper)},
                     {"f", element_to_json(w->f)},
                     {"f(ff)", element_to_json(w->f_times_ff)},
                     {"(ff)f", element_to_json(w->ff_times_f)}});
  }

  Outcome no_one_sided_identity() {
    const auto& t = ctx3_->structure_constants();
    const bool left = has_one_sided_identity(t, Side::left), right = has_one_sided_identity(t, Side::right);
    Json d{{"left_identity", left}, {"right_identity", right}, {"antichain", poset_.is_antichain()}};
    const bool expected = poset_.is_antichain();
    return left == expected && right == expected ? pass(d) : fail(d);
  }

  Outcome classical_n2() {
    if (auto bad = associativity_counterexample(ctx2_->structure_constants())) {
      return fail(Json{{"non_associative_triple", Json::array({(*bad)[0], (*bad)[1], (*bad)[2]})}});
    }
    FlagElement<Ring> e(ctx2_);
    for (Element x = 0; x < poset_.size(); ++x) e = e + basis_element(ctx2_, MultiChain{{x, x}});
    for (std::size_t i = 0; i < ctx2_->dim(); ++i) {
      auto b = basis_element(ctx2_, i);
      if (!(convolve(e, b) == b) || !(convolve(b, e) == b)) {
        return fail(Json{{"identity_fails_on", tuple_json(poset_, ctx2_->tuple(i))}});
      }
    }
    return pass(Json{{"associative", true}, {"identity", element_to_json(e)}});
  }

  Outcome filtration_products() {
    std::mt19937_64 rng(opt_.seed + 1);
    const std::size_t top = poset_.size() ? poset_.length() : 0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i <= top; ++i) {
      auto f = random_element(ctx3_, rng, i), g = random_element(ctx3_, rng, i);
      auto fg = convolve(f, g);
      for (std::size_t k = 0; k < ctx3_->dim(); ++k) {
        const auto& t = ctx3_->tuple(k).entries;
        if (ctx3_->span_length(k) != i) continue;
        const auto x = t[0], z = t[2];
        const auto expect = ring_.mul(f(MultiChain{{x, x, z}}), g(MultiChain{{x, z, z}}));
        ++checked;
        if (fg.coefficient(k) != expect) {
          return fail(Json{{"rule", "(fg)(x,y,z) = f(x,x,z) g(x,z,z)"}, {"i", i},
                           {"tuple", tuple_json(poset_, ctx3_->tuple(k))}, {"f", element_to_json(f)},
                           {"g", element_to_json(g)}});
        }
      }
      for (std::size_t k = 0; k < ctx3_->dim(); ++k) {
        const auto& t = ctx3_->tuple(k).entries;
        auto e = basis_element(ctx3_, k);
        if (t[0] != t[1] && !in_J(convolve(e, f), i + 1)) {
          return fail(Json{{"rule", "e_xyz f in J_(i+1) for x < y"}, {"i", i},
                           {"tuple", tuple_json(poset_, ctx3_->tuple(k))}, {"f", element_to_json(f)}});
        }
        if (t[1] != t[2] && !in_J(convolve(f, e), i + 1)) {
          return fail(Json{{"rule", "f e_xyz in J_(i+1) for y < z"}, {"i", i},
                           {"tuple", tuple_json(poset_, ctx3_->tuple(k))}, {"f", element_to_json(f)}});
        }
      }
    }
    return pass(Json{{"evaluations", checked}});
  }

  Outcome ideals() {
    const std::size_t top = poset_.size() ? poset_.length() : 0;
    const auto a = whole();
    Json ranks = Json::array();
    std::optional<Sub> prev;
    for (std::size_t k = 0; k <= top + 1; ++k) {
      auto j = ideal_J(ctx3_, k);
      ranks.push_back(j.rank());
      if (!is_ideal_of(j, a)) return fail(Json{{"not_an_ideal", k}});
      if (prev && !prev->contains(j)) return fail(Json{{"not_nested_at", k}});
      prev = j;
    }
    if (!(ideal_J(ctx3_, 0) == a)) return fail(Json{{"error", "J_0 differs from the algebra"}});
    if (ideal_J(ctx3_, top + 1).rank() != 0) return fail(Json{{"error", "J_(l(P)+1) is nonzero"}});
    return pass(Json{{"ranks", std::move(ranks)}});
  }

  Outcome commutator_is_j1() {
    const auto& c = chain();
    auto j1 = ideal_J(ctx3_, 1);
    Json d{{"rank_commutator", c.c1.rank()}, {"rank_J1", j1.rank()}};
    return c.c1 == j1 ? pass(d) : fail(d);
  }

  Outcome z2_span_formula() {
    const auto& c = chain();
    auto formula = cover_sum_span(ctx3_);
    auto square = mul_submodule(c.c1, c.c1);
    Json d{{"rank_C2", c.c2.rank()}, {"rank_formula", formula.rank()}, {"rank_C1_squared", square.rank()}};
    return c.c2 == formula && square == formula ? pass(d) : fail(d);
  }

  Outcome z2_subalgebra() {
    return is_subalgebra(chain().c2) ? pass() : fail(Json{{"error", "C2 C2 is not contained in C2"}});
  }

  Outcome z3_is_j2() {
    const auto& c = chain();
    auto j2 = ideal_J(ctx3_, 2);
    Json d{{"rank_C3", c.c3.rank()}, {"rank_J2", j2.rank()}};
    if (!(c.c3 == j2)) return fail(d);
    if (!is_ideal_of(c.c3, whole())) return fail(Json{{"error", "C3 is not an ideal of the algebra"}});
    return pass(d);
  }

  // Idempotent cosets must be exactly the given expected cosets.
  Outcome match_idempotents(const QuotientAlgebra<Ring>& q, const std::vector<Vec<Ring>>& expected,
                            std::uint64_t seed) {
    auto idem = primitive_idempotents(q, seed);
    std::set<Vec<Ring>> got(idem.begin(), idem.end()), want;
    for (const auto& e : expected) want.insert(q.project(e));
    Json d{{"count", idem.size()}, {"expected", expected.size()}};
    return got == want && idem.size() == expected.size() ? pass(d) : fail(d);
  }

  Outcome idempotents_elements() {
    if (!ring_.is_field()) return skipped("primitive idempotents are computed over fields only");
    auto q = quotient(whole(), chain().c1, opt_.seed);
    std::vector<Vec<Ring>> expected;
    for (Element x = 0; x < poset_.size(); ++x) {
      expected.push_back(basis_element(ctx3_, MultiChain{{x, x, x}}).dense());
    }
    return match_idempotents(q, expected, opt_.seed);
  }

  Outcome idempotents_covers() {
    if (!ring_.is_field()) return skipped("primitive idempotents are computed over fields only");
    auto q = quotient(chain().c2, chain().c3, opt_.seed);
    std::vector<Vec<Ring>> expected;
    for (auto [x, y] : poset_.covers()) {
      expected.push_back((basis_element(ctx3_, MultiChain{{x, x, y}}) + basis_element(ctx3_, MultiChain{{x, y, y}})).dense());
    }
    return match_idempotents(q, expected, opt_.seed + 1);
  }

  Outcome reconstruction_canonical() {
    if (!ring_.is_field()) return skipped("reconstruction runs over fields only");
    auto r = reconstruct_poset(forget_poset(ctx3_), opt_.seed);
    const std::set<Cover> got(r.edges.begin(), r.edges.end()), want(poset_.covers().begin(), poset_.covers().end());
    Json d{{"recovered", reconstruction_to_json(ring_, r)["covers"]}, {"elements", r.poset.size()}};
    return got == want && r.poset.size() == poset_.size() ? pass(d) : fail(d);
  }

  Outcome round_trip() {
    if (!ring_.is_field()) return skipped("reconstruction runs over fields only");
    auto r = reconstruct_poset(scramble(ctx3_, opt_.seed), opt_.seed);
    auto phi = find_isomorphism(poset_, r.poset);
    Json d{{"scramble_seed", opt_.seed}, {"recovered", reconstruction_to_json(ring_, r)["covers"]}};
    if (!phi) return fail(d);
    d["isomorphism"] = bijection_json(poset_, *phi);
    return pass(d);
  }

  Outcome induced_automorphisms() {
    const auto group = automorphisms(poset_);
    const auto& table = ctx3_->structure_constants();
    std::vector<LinearMap<Ring>> induced;
    for (const auto& phi : group) {
      induced.push_back(induced_isomorphism(phi, ctx3_, ctx3_));
      if (!is_algebra_isomorphism(induced.back(), table, table)) {
        return fail(Json{{"not_an_automorphism", bijection_json(poset_, phi)}});
      }
    }
    Bijection id(poset_.size());
    for (Element x = 0; x < poset_.size(); ++x) id[x] = x;
    if (!(induced_isomorphism(id, ctx3_, ctx3_) == LinearMap<Ring>::identity(ring_, ctx3_->dim()))) {
      return fail(Json{{"error", "identity does not induce the identity map"}});
    }
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = 0; b < group.size(); ++b) {
        if (!(induced_isomorphism(compose(group[a], group[b]), ctx3_, ctx3_) == induced[a].compose(induced[b]))) {
          return fail(Json{{"functoriality_fails_for", Json::array({bijection_json(poset_, group[a]),
                                                                     bijection_json(poset_, group[b])})}});
        }
      }
    }
    Json d{{"automorphisms", group.size()}};
    if constexpr (std::is_same_v<Ring, PrimeField>) {
      if (ring_.modulus() == 2 && ctx3_->dim() <= kExhaustiveMaxDim) {
        auto all = enumerate_isomorphisms_exhaustive(ctx3_, ctx3_);
        d["exhaustive_automorphisms"] = all.size();
        for (const auto& t : all) {
          if (std::find(induced.begin(), induced.end(), t) == induced.end()) {
            return fail(Json{{"error", "algebra automorphism not induced by a poset automorphism"}});
          }
        }
        if (all.size() != induced.size()) return fail(d);
      }
    }
    return pass(d);
  }

  Outcome derivations_n3() {
    auto basis = derivation_basis(ctx3_);
    Json d{{"rank", basis.size()}};
    if (basis.empty()) return pass(d);
    Json vectors = Json::array();
    for (const auto& m : basis) {
      vectors.push_back(Json{{"verified", check_derivation(ctx3_, m)},
                             {"lemma_violations", derivation_lemma_violations(ctx3_, m)}});
    }
    d["derivations"] = std::move(vectors);
    return fail(d);
  }

  Outcome derivations_n2() {
    auto basis = derivation_basis(ctx2_);
    Json d{{"rank", basis.size()}};
    for (const auto& m : basis) {
      if (!check_derivation(ctx2_, m)) return fail(Json{{"error", "kernel vector is not a derivation"}});
    }
    if (poset_.is_antichain()) return basis.empty() ? pass(d) : fail(d);
    if (basis.empty()) return fail(d);
    // inner derivation by e_(x,x) for the least comparable pair
    for (Element x = 0; x < poset_.size(); ++x) {
      for (Element y = 0; y < poset_.size(); ++y) {
        if (!poset_.less(x, y)) continue;
        auto ad = inner_derivation(basis_element(ctx2_, MultiChain{{x, x}}));
        if (ad.is_zero() || !check_derivation(ctx2_, ad)) return fail(Json{{"error", "inner derivation check failed"}});
        d["inner_witness"] = poset_.name(x);
        return pass(d);
      }
    }
    return fail(d);
  }

  Poset poset_;
  Ring ring_;
  BatteryOptions opt_;
  ContextPtr<Ring> ctx3_, ctx2_;
  std::optional<CommutatorChain<Ring>> chain_;
};

}  // namespace detail

template <class Ring>
PosetReport run_battery(const Poset& p, const Ring& ring, const BatteryOptions& opt = {}) {
  return detail::Battery<Ring>(p, ring, opt).run();
}

/// Runs the battery on every poset, on up to `threads` workers; results keep input order.
inline std::vector<PosetReport> run_battery_all(const std::vector<Poset>& posets, const AnyRing& ring,
                                                const BatteryOptions& opt, unsigned threads) {
  std::vector<PosetReport> out(posets.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(posets.size(), 1))));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < posets.size(); i += threads) {
      out[i] = std::visit([&](const auto& r) { return run_battery(posets[i], r, opt); }, ring);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline Json report_to_json(const std::vector<PosetReport>& reports, const AnyRing& ring, const BatteryOptions& opt) {
  std::map<std::string, std::size_t> counts{{"pass", 0}, {"fail", 0}, {"skipped", 0}, {"unsupported", 0}};
  Json posets = Json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    Json theorems = Json::array();
    for (const auto& r : reports[i].results) {
      Json t{{"id", r.id}, {"status", status_name(r.status)}, {"detail", r.detail}};
      if (opt.timings) t["wall_ms"] = r.wall_ms;
      ++counts[status_name(r.status)];
      theorems.push_back(std::move(t));
    }
    posets.push_back(Json{{"index", i}, {"size", reports[i].poset.size()}, {"poset", poset_to_json(reports[i].poset)},
                          {"theorems", std::move(theorems)}});
  }
  Json summary = Json::object();
  for (const auto& [k, v] : counts) summary[k] = v;
  return Json{{"artifact", "flagalg"}, {"version", kVersion}, {"ring", ring_name(ring)}, {"seed", opt.seed},
              {"posets", std::move(posets)}, {"summary", std::move(summary)}};
}

/// 0 when nothing failed or was unsupported, 1 on any failure, otherwise 2.
inline int exit_code(const std::vector<PosetReport>& reports) {
  bool unsupported = false;
  for (const auto& r : reports) {
    for (const auto& t : r.results) {
      if (t.status == Status::fail) return 1;
      unsupported = unsupported || t.status == Status::unsupported;
    }
  }
  return unsupported ? 2 : 0;
}

}  // namespace flagalg
