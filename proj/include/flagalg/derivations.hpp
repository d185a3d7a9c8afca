#pragma once

// R-linear derivations of I^n(P, R) as the kernel of the Leibniz system
// D(b_i b_j) = D(b_i) b_j + b_i D(b_j) in the d^2 entries of D.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/flag_algebra.hpp"
#include "flagalg/linalg.hpp"
#include "flagalg/structure_constants.hpp"

namespace flagalg {

/// Sorted by column, no zero entries.
template <class Ring>
using SparseRow = std::vector<std::pair<std::uint32_t, typename Ring::value_type>>;

/// Unknown D[k][l] (coefficient of b_k in D(b_l)) sits at column k * d + l.
template <class Ring>
struct LeibnizSystem {
  ContextPtr<Ring> context;
  std::size_t dim = 0;
  std::size_t unknowns = 0;
  /// d^3 scalar equations before all-zero rows are dropped.
  std::size_t total_rows = 0;
  std::vector<SparseRow<Ring>> rows;

  std::size_t column(std::size_t k, std::size_t l) const { return k * dim + l; }
};

template <class Ring>
LeibnizSystem<Ring> leibniz_system(const ContextPtr<Ring>& ctx) {
  const auto& ring = ctx->ring();
  const auto& table = ctx->structure_constants();
  const std::size_t d = ctx->dim();
  using value_type = typename Ring::value_type;
  LeibnizSystem<Ring> sys{ctx, d, d * d, d * d * d, {}};

  // by_left[i][k]: (l, c_il^k); by_right[j][k]: (l, c_lj^k)
  std::vector<std::vector<std::vector<std::pair<std::size_t, value_type>>>> by_left(
      d, std::vector<std::vector<std::pair<std::size_t, value_type>>>(d)),
      by_right = by_left;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (const auto& t : table.product(a, b)) {
        by_left[a][t.index].emplace_back(b, t.coeff);
        by_right[b][t.index].emplace_back(a, t.coeff);
      }
    }
  }

  std::map<std::uint32_t, value_type> acc;
  auto put = [&](std::size_t col, const value_type& c) {
    auto [it, fresh] = acc.try_emplace(static_cast<std::uint32_t>(col), c);
    if (!fresh) it->second = ring.add(it->second, c);
  };
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        acc.clear();
        for (const auto& t : table.product(i, j)) put(sys.column(k, t.index), t.coeff);
        for (const auto& [l, c] : by_right[j][k]) put(sys.column(l, i), ring.neg(c));
        for (const auto& [l, c] : by_left[i][k]) put(sys.column(l, j), ring.neg(c));
        SparseRow<Ring> row;
        for (auto& [col, c] : acc) {
          if (!ring.is_zero(c)) row.emplace_back(col, std::move(c));
        }
        if (!row.empty()) sys.rows.push_back(std::move(row));
      }
    }
  }
  return sys;
}

namespace detail {

template <class Ring>
SparseRow<Ring> sparse_axpy(const Ring& ring, const SparseRow<Ring>& a, const typename Ring::value_type& c,
                            const SparseRow<Ring>& b) {
  // a + c b
  SparseRow<Ring> out;
  out.reserve(a.size() + b.size());
  std::size_t p = 0, q = 0;
  while (p < a.size() || q < b.size()) {
    if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
      out.push_back(a[p++]);
    } else if (p == a.size() || b[q].first < a[p].first) {
      out.emplace_back(b[q].first, ring.mul(c, b[q].second));
      ++q;
    } else {
      auto v = ring.add(a[p].second, ring.mul(c, b[q].second));
      if (!ring.is_zero(v)) out.emplace_back(a[p].first, std::move(v));
      ++p;
      ++q;
    }
  }
  return out;
}

template <class Ring>
const typename Ring::value_type* sparse_at(const SparseRow<Ring>& r, std::uint32_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::uint32_t c) { return e.first < c; });
  return it != r.end() && it->first == col ? &it->second : nullptr;
}

/// Sparse elimination over a field. Returns the kernel in canonical form and
/// the indices of the rows that raised the rank. Stops once the rank is full.
template <class Field>
std::pair<Submodule<Field>, std::vector<std::size_t>> sparse_kernel(const Field& field, std::size_t unknowns,
                                                                   const std::vector<SparseRow<Field>>& rows) {
  std::map<std::uint32_t, SparseRow<Field>> pivots;  // leading column -> monic row
  std::vector<std::size_t> used;
  for (std::size_t r = 0; r < rows.size() && pivots.size() < unknowns; ++r) {
    SparseRow<Field> row = rows[r];
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      row = sparse_axpy(field, row, field.neg(row.front().second), it->second);
    }
    if (row.empty()) continue;
    const auto inv = *field.inverse(row.front().second);
    for (auto& e : row) e.second = field.mul(inv, e.second);
    pivots.emplace(row.front().first, std::move(row));
    used.push_back(r);
  }

  Submodule<Field> out(field, unknowns);
  if (pivots.size() == unknowns) return {std::move(out), std::move(used)};
  // Back substitution to reduced form, highest pivot first.
  for (auto hi = pivots.rbegin(); hi != pivots.rend(); ++hi) {
    for (auto& [col, row] : pivots) {
      if (col >= hi->first) break;
      if (const auto* c = sparse_at<Field>(row, hi->first)) row = sparse_axpy(field, row, field.neg(*c), hi->second);
    }
  }
  std::vector<Vec<Field>> basis;
  for (std::uint32_t f = 0; f < unknowns; ++f) {
    if (pivots.count(f)) continue;
    Vec<Field> v = zero_vector(field, unknowns);
    v[f] = field.one();
    for (const auto& [col, row] : pivots) {
      if (const auto* c = sparse_at<Field>(row, f)) v[col] = field.neg(*c);
    }
    basis.push_back(std::move(v));
  }
  for (auto& v : basis) out.insert(std::move(v));
  return {std::move(out), std::move(used)};
}

}  // namespace detail

/// Kernel of the Leibniz system as a submodule of R^(d^2). Over Z the kernel
/// lattice is computed from a Q-basis of the row space.
template <class Ring>
Submodule<Ring> solve_leibniz(const LeibnizSystem<Ring>& sys) {
  const auto& ring = sys.context->ring();
  require_linear_algebra(ring);
  if constexpr (Ring::is_integer_ring) {
    std::vector<SparseRow<Rationals>> qrows;
    qrows.reserve(sys.rows.size());
    for (const auto& row : sys.rows) {
      SparseRow<Rationals> q;
      for (const auto& [col, c] : row) q.emplace_back(col, mpq_class(c));
      qrows.push_back(std::move(q));
    }
    auto [qkernel, used] = detail::sparse_kernel(Rationals{}, sys.unknowns, qrows);
    if (qkernel.rank() == 0) return Submodule<Ring>(ring, sys.unknowns);
    std::vector<Vec<Ring>> dense;
    for (auto r : used) {
      Vec<Ring> v = zero_vector(ring, sys.unknowns);
      for (const auto& [col, c] : sys.rows[r]) v[col] = c;
      dense.push_back(std::move(v));
    }
    return kernel(ring, sys.unknowns, dense);
  } else {
    return detail::sparse_kernel(ring, sys.unknowns, sys.rows).first;
  }
}

template <class Ring>
LinearMap<Ring> derivation_from_vector(const LeibnizSystem<Ring>& sys, const Vec<Ring>& v) {
  LinearMap<Ring> m(sys.context->ring(), sys.dim, sys.dim);
  for (std::size_t k = 0; k < sys.dim; ++k) {
    for (std::size_t l = 0; l < sys.dim; ++l) m.image(l)[k] = v[sys.column(k, l)];
  }
  return m;
}

/// Canonical basis of Der(I^n(P, R)).
template <class Ring>
std::vector<LinearMap<Ring>> derivation_basis(const ContextPtr<Ring>& ctx) {
  require_linear_algebra(ctx->ring());
  auto sys = leibniz_system(ctx);
  std::vector<LinearMap<Ring>> out;
  const auto kernel_basis = solve_leibniz(sys);
  for (const auto& v : kernel_basis.basis()) out.push_back(derivation_from_vector(sys, v));
  return out;
}

/// Checks the Leibniz rule on all basis pairs through the convolution product,
/// independently of the structure constants.
template <class Ring>
bool check_derivation(const ContextPtr<Ring>& ctx, const LinearMap<Ring>& t) {
  const std::size_t d = ctx->dim();
  if (t.domain_dim() != d || t.codomain_dim() != d) throw DomainError("check_derivation: dimension mismatch");
  std::vector<FlagElement<Ring>> basis, images;
  for (std::size_t i = 0; i < d; ++i) {
    basis.push_back(basis_element(ctx, i));
    images.push_back(FlagElement<Ring>::from_dense(ctx, t.image(i)));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      auto lhs = FlagElement<Ring>::from_dense(ctx, t.apply(convolve(basis[i], basis[j]).dense()));
      auto rhs = convolve(images[i], basis[j]) + convolve(basis[i], images[j]);
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

/// ad_a : b -> ab - ba, built from the convolution product.
template <class Ring>
LinearMap<Ring> inner_derivation(const FlagElement<Ring>& a) {
  const auto& ctx = a.context_ptr();
  LinearMap<Ring> m(ctx->ring(), ctx->dim(), ctx->dim());
  for (std::size_t i = 0; i < ctx->dim(); ++i) m.image(i) = commutator(a, basis_element(ctx, i)).dense();
  return m;
}

/// Consequences a derivation of I^3(P, R) must satisfy: D(e_xxx) = 0,
/// D(e_xxy) = D(e_xyy) = 0 for x < y and D(e_xzy) = 0. Returns the violated ones.
template <class Ring>
std::vector<std::string> derivation_lemma_violations(const ContextPtr<Ring>& ctx, const LinearMap<Ring>& d) {
  if (ctx->order() != 3) throw DomainError("derivation lemmas concern n = 3 only");
  const auto& p = ctx->poset();
  const auto& ring = ctx->ring();
  std::vector<std::string> out;
  auto vanishes = [&](const std::vector<Element>& x) { return is_zero_vector(ring, d.image(ctx->index_of(x))); };
  auto name = [&](const std::vector<Element>& x) {
    std::string s = "D(e_";
    for (auto e : x) s += "(" + p.name(e) + ")";
    return s + ") != 0";
  };
  for (Element x = 0; x < p.size(); ++x) {
    if (!vanishes({x, x, x})) out.push_back(name({x, x, x}));
  }
  for (Element x = 0; x < p.size(); ++x) {
    for (Element y = 0; y < p.size(); ++y) {
      if (!p.less(x, y)) continue;
      if (!vanishes({x, x, y})) out.push_back(name({x, x, y}));
      if (!vanishes({x, y, y})) out.push_back(name({x, y, y}));
    }
  }
  for (std::size_t i = 0; i < ctx->dim(); ++i) {
    const auto& t = ctx->tuple(i).entries;
    if (t[0] != t[1] && t[1] != t[2] && !is_zero_vector(ring, d.image(i))) out.push_back(name(t));
  }
  return out;
}

}  // namespace flagalg
