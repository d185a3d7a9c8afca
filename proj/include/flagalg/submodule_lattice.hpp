#pragma once

// Submodules of an algebra given by structure constants: products and
// commutators of submodules, the ideals J^n_k, the commutator chain of I^3,
// quotient algebras and their primitive idempotents.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/flag_algebra.hpp"
#include "flagalg/linalg.hpp"
#include "flagalg/polynomial.hpp"
#include "flagalg/structure_constants.hpp"

namespace flagalg {

template <class Ring>
using TablePtr = std::shared_ptr<const StructureConstants<Ring>>;

/// Shares ownership with the context.
template <class Ring>
TablePtr<Ring> table_of(const ContextPtr<Ring>& ctx) {
  return TablePtr<Ring>(ctx, &ctx->structure_constants());
}

template <class Ring>
class AlgebraSubmodule {
 public:
  AlgebraSubmodule(TablePtr<Ring> algebra, Submodule<Ring> module)
      : algebra_(std::move(algebra)), module_(std::move(module)) {
    if (module_.dim() != algebra_->dim()) throw DomainError("submodule does not live in this algebra");
  }

  static AlgebraSubmodule zero(TablePtr<Ring> algebra) {
    Submodule<Ring> m(algebra->ring(), algebra->dim());
    return AlgebraSubmodule(std::move(algebra), std::move(m));
  }

  static AlgebraSubmodule whole(TablePtr<Ring> algebra) {
    const auto& ring = algebra->ring();
    Submodule<Ring> m(ring, algebra->dim());
    for (std::size_t i = 0; i < algebra->dim(); ++i) m.insert(unit_vector(ring, algebra->dim(), i));
    return AlgebraSubmodule(std::move(algebra), std::move(m));
  }

  static AlgebraSubmodule span(TablePtr<Ring> algebra, const std::vector<Vec<Ring>>& generators) {
    auto m = Submodule<Ring>::span(algebra->ring(), algebra->dim(), generators);
    return AlgebraSubmodule(std::move(algebra), std::move(m));
  }

  const StructureConstants<Ring>& algebra() const { return *algebra_; }
  const TablePtr<Ring>& algebra_ptr() const { return algebra_; }
  const Submodule<Ring>& module() const { return module_; }
  const Ring& ring() const { return algebra_->ring(); }
  std::size_t rank() const { return module_.rank(); }
  const std::vector<Vec<Ring>>& basis() const { return module_.basis(); }

  bool contains(const Vec<Ring>& v) const { return module_.contains(v); }
  bool contains(const AlgebraSubmodule& o) const { return module_.contains(o.module_); }

  void require_same_algebra(const AlgebraSubmodule& o) const {
    if (algebra_ != o.algebra_ && !(*algebra_ == *o.algebra_)) {
      throw DomainError("submodules belong to different algebras");
    }
  }

  bool operator==(const AlgebraSubmodule& o) const {
    return (algebra_ == o.algebra_ || *algebra_ == *o.algebra_) && module_ == o.module_;
  }

 private:
  TablePtr<Ring> algebra_;
  Submodule<Ring> module_;
};

/// J^n_k = span{e_x : l(x_1, x_n) >= k}.
template <class Ring>
AlgebraSubmodule<Ring> ideal_J(const ContextPtr<Ring>& ctx, std::size_t k) {
  std::vector<Vec<Ring>> gens;
  for (std::size_t i = 0; i < ctx->dim(); ++i) {
    if (ctx->span_length(i) >= k) gens.push_back(unit_vector(ctx->ring(), ctx->dim(), i));
  }
  return AlgebraSubmodule<Ring>::span(table_of(ctx), gens);
}

/// UV = span{u v} over basis rows.
template <class Ring>
AlgebraSubmodule<Ring> mul_submodule(const AlgebraSubmodule<Ring>& u, const AlgebraSubmodule<Ring>& v) {
  u.require_same_algebra(v);
  const auto& table = u.algebra();
  auto out = Submodule<Ring>(table.ring(), table.dim());
  for (const auto& a : u.basis()) {
    const auto left = table.left_operator(a);
    for (const auto& b : v.basis()) out.insert(apply_columns(table.ring(), left, b));
  }
  return AlgebraSubmodule<Ring>(u.algebra_ptr(), std::move(out));
}

/// [U, V] = span{uv - vu} over basis rows.
template <class Ring>
AlgebraSubmodule<Ring> commutator_submodule(const AlgebraSubmodule<Ring>& u, const AlgebraSubmodule<Ring>& v) {
  u.require_same_algebra(v);
  const auto& table = u.algebra();
  const auto& ring = table.ring();
  std::vector<std::vector<Vec<Ring>>> left_u, left_v;
  for (const auto& a : u.basis()) left_u.push_back(table.left_operator(a));
  const bool same = u.module() == v.module();
  if (!same) {
    for (const auto& b : v.basis()) left_v.push_back(table.left_operator(b));
  }
  const auto& lv = same ? left_u : left_v;
  auto out = Submodule<Ring>(ring, table.dim());
  for (std::size_t i = 0; i < u.basis().size(); ++i) {
    // [a, a] = 0 and [b, a] = -[a, b]
    for (std::size_t j = same ? i + 1 : 0; j < v.basis().size(); ++j) {
      out.insert(vec_sub(ring, apply_columns(ring, left_u[i], v.basis()[j]),
                         apply_columns(ring, lv[j], u.basis()[i])));
    }
  }
  return AlgebraSubmodule<Ring>(u.algebra_ptr(), std::move(out));
}

/// Whether U V is contained in W.
template <class Ring>
bool product_within(const AlgebraSubmodule<Ring>& u, const AlgebraSubmodule<Ring>& v,
                    const AlgebraSubmodule<Ring>& w) {
  u.require_same_algebra(v);
  u.require_same_algebra(w);
  const auto& table = u.algebra();
  for (const auto& a : u.basis()) {
    const auto left = table.left_operator(a);
    for (const auto& b : v.basis()) {
      if (!w.contains(apply_columns(table.ring(), left, b))) return false;
    }
  }
  return true;
}

template <class Ring>
bool is_subalgebra(const AlgebraSubmodule<Ring>& u) {
  return product_within(u, u, u);
}

/// Whether I is a two-sided ideal of U.
template <class Ring>
bool is_ideal_of(const AlgebraSubmodule<Ring>& ideal, const AlgebraSubmodule<Ring>& u) {
  return product_within(u, ideal, ideal) && product_within(ideal, u, ideal);
}

template <class Ring>
struct CommutatorChain {
  AlgebraSubmodule<Ring> c1, c2, c3;
};

/// C1 = [A, A], C2 = [C1, C1], C3 = [C2, C2] for any algebra table.
template <class Ring>
CommutatorChain<Ring> commutator_chain(const TablePtr<Ring>& table) {
  auto whole = AlgebraSubmodule<Ring>::whole(table);
  auto c1 = commutator_submodule(whole, whole);
  auto c2 = commutator_submodule(c1, c1);
  auto c3 = commutator_submodule(c2, c2);
  return {std::move(c1), std::move(c2), std::move(c3)};
}

/// The commutator chain of I^3(P, R).
template <class Ring>
CommutatorChain<Ring> z_chain(const ContextPtr<Ring>& ctx) {
  if (ctx->order() != 3) throw DomainError("z_chain is only defined for n = 3");
  return commutator_chain(table_of(ctx));
}

/// span{e_xxy + e_xyy : l(x, y) = 1} + J^3_2, built directly from the poset.
template <class Ring>
AlgebraSubmodule<Ring> cover_sum_span(const ContextPtr<Ring>& ctx) {
  if (ctx->order() != 3) throw DomainError("cover_sum_span is only defined for n = 3");
  const auto& ring = ctx->ring();
  std::vector<Vec<Ring>> gens = ideal_J(ctx, 2).basis();
  for (auto [x, y] : ctx->poset().covers()) {
    Vec<Ring> v = zero_vector(ring, ctx->dim());
    v[ctx->index_of({x, x, y})] = ring.one();
    v[ctx->index_of({x, y, y})] = ring.one();
    gens.push_back(std::move(v));
  }
  return AlgebraSubmodule<Ring>::span(table_of(ctx), gens);
}

namespace detail {

// Coordinates with respect to a linearly independent family over a field.
template <class Ring>
class Coordinatizer {
 public:
  Coordinatizer(const Ring& ring, std::vector<Vec<Ring>> family, std::size_t dim)
      : ring_(ring), family_(std::move(family)), dim_(dim) {
    if (family_.empty()) return;
    auto rref = Submodule<Ring>::span(ring_, dim_, family_);
    if (rref.rank() != family_.size()) throw DomainError("coordinatizer family is not independent");
    columns_ = rref.pivots();
    std::vector<Vec<Ring>> cols;
    for (const auto& f : family_) {
      Vec<Ring> c;
      for (auto s : columns_) c.push_back(f[s]);
      cols.push_back(std::move(c));
    }
    inverse_ = inverse(LinearMap<Ring>(ring_, family_.size(), std::move(cols)));
  }

  std::optional<Vec<Ring>> coordinates(const Vec<Ring>& w) const {
    if (family_.empty()) {
      if (is_zero_vector(ring_, w)) return Vec<Ring>{};
      return std::nullopt;
    }
    Vec<Ring> restricted;
    for (auto s : columns_) restricted.push_back(w[s]);
    Vec<Ring> c = inverse_->apply(restricted);
    Vec<Ring> back = zero_vector(ring_, dim_);
    for (std::size_t i = 0; i < c.size(); ++i) add_scaled(ring_, back, c[i], family_[i]);
    if (back != w) return std::nullopt;
    return c;
  }

 private:
  Ring ring_;
  std::vector<Vec<Ring>> family_;
  std::size_t dim_;
  std::vector<std::size_t> columns_;
  std::optional<LinearMap<Ring>> inverse_;
};

}  // namespace detail

/// U / V on a transversal basis t_1..t_q of representatives.
template <class Ring>
class QuotientAlgebra {
 public:
  QuotientAlgebra(AlgebraSubmodule<Ring> numerator, AlgebraSubmodule<Ring> denominator,
                  std::vector<Vec<Ring>> transversal, StructureConstants<Ring> table)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)),
        transversal_(std::move(transversal)), table_(std::move(table)) {}

  const AlgebraSubmodule<Ring>& numerator() const { return numerator_; }
  const AlgebraSubmodule<Ring>& denominator() const { return denominator_; }
  const std::vector<Vec<Ring>>& transversal() const { return transversal_; }
  const StructureConstants<Ring>& structure_constants() const { return table_; }
  const Ring& ring() const { return table_.ring(); }
  std::size_t dim() const { return transversal_.size(); }

  /// The representative sum_a coords[a] t_a in the ambient algebra.
  Vec<Ring> lift(const Vec<Ring>& coords) const {
    Vec<Ring> out = zero_vector(ring(), numerator_.algebra().dim());
    for (std::size_t a = 0; a < coords.size(); ++a) add_scaled(ring(), out, coords[a], transversal_[a]);
    return out;
  }

  /// Coordinates of the coset w + V. Throws DomainError if w is not in U.
  Vec<Ring> project(const Vec<Ring>& w) const { return project_with(family(), w); }

 private:
  std::vector<Vec<Ring>> family() const {
    auto f = denominator_.basis();
    f.insert(f.end(), transversal_.begin(), transversal_.end());
    return f;
  }

  Vec<Ring> project_with(const std::vector<Vec<Ring>>& fam, const Vec<Ring>& w) const {
    auto c = solve_left(ring(), fam, w);
    if (!c) throw DomainError("vector does not lie in the numerator of the quotient");
    return Vec<Ring>(c->begin() + static_cast<std::ptrdiff_t>(denominator_.rank()), c->end());
  }

  AlgebraSubmodule<Ring> numerator_, denominator_;
  std::vector<Vec<Ring>> transversal_;
  StructureConstants<Ring> table_;
};

/// The quotient algebra U / V. Verifies V within U, U closed under the product and
/// V an ideal of U; spot-checks that the induced product does not depend on the
/// representatives (seeded).
template <class Ring>
QuotientAlgebra<Ring> quotient(const AlgebraSubmodule<Ring>& u, const AlgebraSubmodule<Ring>& v,
                               std::uint64_t seed = 0) {
  u.require_same_algebra(v);
  const auto& ring = u.ring();
  const auto& table = u.algebra();
  if (!u.contains(v)) throw DomainError("quotient: denominator is not contained in the numerator");
  if (!is_subalgebra(u)) throw DomainError("quotient: numerator is not closed under the product");
  if (!is_ideal_of(v, u)) throw DomainError("quotient: denominator is not an ideal of the numerator");

  std::vector<Vec<Ring>> transversal;
  if constexpr (Ring::is_integer_ring) {
    std::vector<Vec<Rationals>> seen;
    for (const auto& b : v.basis()) seen.push_back(detail::to_rational(b));
    auto qspan = Submodule<Rationals>::span(Rationals{}, table.dim(), seen);
    for (const auto& b : u.basis()) {
      if (qspan.insert(detail::to_rational(b))) transversal.push_back(b);
    }
    auto gens = v.basis();
    gens.insert(gens.end(), transversal.begin(), transversal.end());
    if (!(Submodule<Ring>::span(ring, table.dim(), gens) == u.module())) {
      throw CapabilityError("quotient over Z: the denominator has no free complement in the numerator");
    }
  } else {
    auto grow = v.module();
    for (const auto& b : u.basis()) {
      if (grow.insert(b)) transversal.push_back(b);
    }
  }

  auto fam = v.basis();
  fam.insert(fam.end(), transversal.begin(), transversal.end());
  const std::size_t q = transversal.size();
  std::optional<detail::Coordinatizer<Ring>> coords;
  if constexpr (!Ring::is_integer_ring) coords.emplace(ring, fam, table.dim());
  auto fast_project = [&](const Vec<Ring>& w) -> Vec<Ring> {
    if constexpr (Ring::is_integer_ring) {
      auto c = solve_left(ring, fam, w);
      if (!c) throw DomainError("quotient: product left the numerator");
      return Vec<Ring>(c->begin() + static_cast<std::ptrdiff_t>(v.rank()), c->end());
    } else {
      auto c = coords->coordinates(w);
      if (!c) throw DomainError("quotient: product left the numerator");
      return Vec<Ring>(c->begin() + static_cast<std::ptrdiff_t>(v.rank()), c->end());
    }
  };

  StructureConstants<Ring> qtable(ring, q);
  std::vector<std::vector<Vec<Ring>>> left;
  for (const auto& t : transversal) left.push_back(table.left_operator(t));
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) qtable.set_product(a, b, fast_project(apply_columns(ring, left[a], transversal[b])));
  }
  QuotientAlgebra<Ring> out(u, v, std::move(transversal), std::move(qtable));

  if (q > 0 && v.rank() > 0) {
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 4; ++trial) {
      Vec<Ring> x(q), y(q);
      for (auto& c : x) c = ring.sample(rng);
      for (auto& c : y) c = ring.sample(rng);
      Vec<Ring> sx = out.lift(x), sy = out.lift(y);
      for (const auto& b : v.basis()) {
        add_scaled(ring, sx, ring.sample(rng), b);
        add_scaled(ring, sy, ring.sample(rng), b);
      }
      if (fast_project(table.multiply(sx, sy)) != out.structure_constants().multiply(x, y)) {
        throw DomainError("quotient: induced product depends on the representatives");
      }
    }
  }
  return out;
}

/// Multiplicative identity of an algebra table, if it exists.
template <class Ring>
std::optional<Vec<Ring>> identity_element(const StructureConstants<Ring>& table) {
  const auto& ring = table.ring();
  const std::size_t d = table.dim();
  if (d == 0) return Vec<Ring>{};
  std::vector<Vec<Ring>> family(d, zero_vector(ring, 2 * d * d));
  Vec<Ring> target = zero_vector(ring, 2 * d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (const auto& t : table.product(i, j)) family[i][j * d + t.index] = t.coeff;
      for (const auto& t : table.product(j, i)) family[i][d * d + j * d + t.index] = t.coeff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    target[j * d + j] = ring.one();
    target[d * d + j * d + j] = ring.one();
  }
  return solve_left(ring, family, target);
}

namespace detail {

template <class Ring>
std::vector<Vec<Ring>> sorted_idempotents(const Ring& ring, std::vector<Vec<Ring>> idem) {
  std::sort(idem.begin(), idem.end(), [&](const Vec<Ring>& a, const Vec<Ring>& b) {
    const auto la = leading_index(ring, a), lb = leading_index(ring, b);
    if (la != lb) return la < lb;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto sa = ring.to_string(a[i]), sb = ring.to_string(b[i]);
      if (sa != sb) return sa < sb;
    }
    return false;
  });
  return idem;
}

}  // namespace detail

inline constexpr int kSplittingAttempts = 32;

/// Complete set of pairwise orthogonal primitive idempotents of a commutative,
/// split semisimple algebra over a field, summing to its identity. Components
/// are split recursively with the minimal polynomial of a random element
/// (Lagrange interpolation over its roots), with a seeded retry budget per component.
template <class Ring>
std::vector<Vec<Ring>> primitive_idempotents(const StructureConstants<Ring>& table, std::uint64_t seed = 0) {
  const auto& ring = table.ring();
  require_field(ring, "primitive_idempotents");
  if (!table.is_commutative()) throw DomainError("primitive_idempotents: algebra is not commutative");
  const std::size_t d = table.dim();
  if (d == 0) return {};
  auto one = identity_element(table);
  if (!one) throw SplittingError("algebra has no identity element, so it is not split semisimple");

  std::mt19937_64 rng(seed);
  std::vector<Vec<Ring>> done, work{*one};
  while (!work.empty()) {
    Vec<Ring> e = std::move(work.back());
    work.pop_back();
    const auto left_e = table.left_operator(e);
    std::vector<Vec<Ring>> component;
    for (std::size_t a = 0; a < d; ++a) component.push_back(left_e[a]);
    const std::size_t cdim = rank_of(ring, d, component);
    if (cdim == 1) {
      done.push_back(std::move(e));
      continue;
    }
    bool split = false;
    for (int attempt = 0; attempt < kSplittingAttempts && !split; ++attempt) {
      Vec<Ring> r(d);
      for (auto& c : r) c = ring.sample(rng);
      const Vec<Ring> t = apply_columns(ring, left_e, r);
      const auto left_t = table.left_operator(t);
      // powers e, t, t^2, ... until the first linear dependency
      std::vector<Vec<Ring>> powers{e};
      Poly<Ring> minpoly;
      while (true) {
        Vec<Ring> next = apply_columns(ring, left_t, powers.back());
        if (auto c = solve_left(ring, powers, next)) {
          minpoly.assign(powers.size() + 1, ring.zero());
          for (std::size_t i = 0; i < c->size(); ++i) minpoly[i] = ring.neg((*c)[i]);
          minpoly.back() = ring.one();
          break;
        }
        powers.push_back(std::move(next));
        if (powers.size() > cdim + 1) throw SplittingError("element powers do not become dependent");
      }
      const std::size_t k = minpoly.size() - 1;
      if (k < 2) continue;
      if (!poly::is_squarefree(ring, minpoly)) {
        throw SplittingError("minimal polynomial has a repeated factor: the algebra is not semisimple");
      }
      auto lambdas = poly::roots(ring, minpoly);
      if (lambdas.size() != k) continue;
      for (std::size_t i = 0; i < k; ++i) {
        Vec<Ring> idem = e;
        for (std::size_t j = 0; j < k; ++j) {
          if (j == i) continue;
          Vec<Ring> factor = t;
          add_scaled(ring, factor, ring.neg(lambdas[j]), e);
          factor = scaled(ring, *ring.inverse(ring.sub(lambdas[i], lambdas[j])), std::move(factor));
          idem = table.multiply(idem, factor);
        }
        work.push_back(std::move(idem));
      }
      split = true;
    }
    if (!split) {
      throw SplittingError("no splitting element found for a " + std::to_string(cdim) +
                           "-dimensional component after " + std::to_string(kSplittingAttempts) +
                           " attempts over " + ring.name() + "; the algebra is not split semisimple" +
                           " over this field (try --ring Q)");
    }
  }

  Vec<Ring> total = zero_vector(ring, d);
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (table.multiply(done[i], done[i]) != done[i]) throw SplittingError("splitting produced a non-idempotent");
    for (std::size_t j = i + 1; j < done.size(); ++j) {
      if (!is_zero_vector(ring, table.multiply(done[i], done[j]))) {
        throw SplittingError("splitting produced non-orthogonal idempotents");
      }
    }
    total = vec_add(ring, std::move(total), done[i]);
  }
  if (total != *one || done.size() != d) {
    throw SplittingError("idempotents do not decompose the algebra into one-dimensional components");
  }
  return detail::sorted_idempotents(ring, std::move(done));
}

template <class Ring>
std::vector<Vec<Ring>> primitive_idempotents(const QuotientAlgebra<Ring>& q, std::uint64_t seed = 0) {
  return primitive_idempotents(q.structure_constants(), seed);
}

}  // namespace flagalg
