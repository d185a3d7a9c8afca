#pragma once

// Exact linear algebra over the coefficient rings: canonical submodules,
// kernels, linear solves and linear maps.
//
// Canonical forms:
//  - over a field, the reduced row echelon form (pivots equal 1, every pivot
//    column is zero outside its pivot row);
//  - over Z, the row-style Hermite normal form: rows are listed by increasing
//    pivot column, each pivot is positive and every entry above a pivot lies
//    in [0, pivot).
// Two submodules are equal iff their canonical bases are identical.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/ring.hpp"

namespace flagalg {

template <class Ring>
using Vec = std::vector<typename Ring::value_type>;

template <class Ring>
Vec<Ring> zero_vector(const Ring& ring, std::size_t dim) {
  return Vec<Ring>(dim, ring.zero());
}

template <class Ring>
Vec<Ring> unit_vector(const Ring& ring, std::size_t dim, std::size_t i) {
  Vec<Ring> v(dim, ring.zero());
  v[i] = ring.one();
  return v;
}

template <class Ring>
bool is_zero_vector(const Ring& ring, const Vec<Ring>& v) {
  return std::all_of(v.begin(), v.end(), [&](const auto& a) { return ring.is_zero(a); });
}

// v += c * w
template <class Ring>
void add_scaled(const Ring& ring, Vec<Ring>& v, const typename Ring::value_type& c, const Vec<Ring>& w) {
  if (ring.is_zero(c)) return;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!ring.is_zero(w[i])) v[i] = ring.add(v[i], ring.mul(c, w[i]));
  }
}

template <class Ring>
Vec<Ring> scaled(const Ring& ring, const typename Ring::value_type& c, Vec<Ring> v) {
  for (auto& a : v) a = ring.mul(c, a);
  return v;
}

template <class Ring>
Vec<Ring> vec_add(const Ring& ring, Vec<Ring> a, const Vec<Ring>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ring.add(a[i], b[i]);
  return a;
}

template <class Ring>
Vec<Ring> vec_sub(const Ring& ring, Vec<Ring> a, const Vec<Ring>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ring.sub(a[i], b[i]);
  return a;
}

template <class Ring>
std::size_t leading_index(const Ring& ring, const Vec<Ring>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!ring.is_zero(v[i])) return i;
  }
  return v.size();
}

/// Throws unless span/kernel/quotient computations are available over `ring`.
template <class Ring>
void require_linear_algebra(const Ring& ring) {
  if constexpr (!Ring::is_integer_ring) {
    if (!ring.is_field()) {
      throw CapabilityError("submodule computations over " + ring.name() +
                            " are unsupported (need a field or Z)");
    }
  }
}

template <class Ring>
void require_field(const Ring& ring, const std::string& what) {
  if (!ring.is_field()) throw CapabilityError(what + " requires a field, got " + ring.name());
}

/// An R-submodule of R^dim kept in canonical form.
template <class Ring>
class Submodule {
 public:
  using value_type = typename Ring::value_type;

  Submodule(Ring ring, std::size_t dim) : ring_(std::move(ring)), dim_(dim) {
    require_linear_algebra(ring_);
  }

  static Submodule span(Ring ring, std::size_t dim, const std::vector<Vec<Ring>>& generators) {
    Submodule s(std::move(ring), dim);
    for (const auto& g : generators) s.insert(g);
    return s;
  }

  const Ring& ring() const { return ring_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec<Ring>>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Remainder of `v` after reduction by the canonical basis; zero iff member.
  Vec<Ring> reduce(Vec<Ring> v) const {
    check_dim(v);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& a = v[pivots_[r]];
      if (ring_.is_zero(a)) continue;
      if constexpr (Ring::is_integer_ring) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), rows_[r][pivots_[r]].get_mpz_t());
        add_scaled(ring_, v, ring_.neg(q), rows_[r]);
      } else {
        add_scaled(ring_, v, ring_.neg(a), rows_[r]);
      }
    }
    return v;
  }

  bool contains(const Vec<Ring>& v) const { return is_zero_vector(ring_, reduce(v)); }

  bool contains(const Submodule& other) const {
    return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const auto& r) { return contains(r); });
  }

  /// Adds a generator; returns true if the submodule grew.
  bool insert(Vec<Ring> v) {
    v = reduce(std::move(v));
    if (is_zero_vector(ring_, v)) return false;
    if constexpr (Ring::is_integer_ring) {
      insert_integer(std::move(v));
    } else {
      insert_field(std::move(v));
    }
    return true;
  }

  bool operator==(const Submodule& o) const {
    return dim_ == o.dim_ && ring_ == o.ring_ && rows_ == o.rows_;
  }

 private:
  void check_dim(const Vec<Ring>& v) const {
    if (v.size() != dim_) {
      throw DomainError("vector of length " + std::to_string(v.size()) + " in ambient dimension " +
                        std::to_string(dim_));
    }
  }

  void insert_field(Vec<Ring> v) {
    const std::size_t lead = leading_index(ring_, v);
    const auto inv = *ring_.inverse(v[lead]);
    v = scaled(ring_, inv, std::move(v));
    for (auto& row : rows_) {
      if (!ring_.is_zero(row[lead])) add_scaled(ring_, row, ring_.neg(row[lead]), v);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, lead);
    rows_.insert(rows_.begin() + pos, std::move(v));
  }

  void insert_integer(Vec<Ring> v) {
    while (!is_zero_vector(ring_, v)) {
      const std::size_t lead = leading_index(ring_, v);
      auto it = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
      const auto pos = it - pivots_.begin();
      if (it == pivots_.end() || *it != lead) {
        if (v[lead] < 0) v = scaled(ring_, mpz_class(-1), std::move(v));
        pivots_.insert(it, lead);
        rows_.insert(rows_.begin() + pos, std::move(v));
        break;
      }
      // Bezout step on the shared pivot column.
      auto& row = rows_[pos];
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), row[lead].get_mpz_t(), v[lead].get_mpz_t());
      mpz_class p_over_g = row[lead] / g, a_over_g = v[lead] / g;
      Vec<Ring> combined = scaled(ring_, s, row);
      add_scaled(ring_, combined, t, v);
      Vec<Ring> rest = scaled(ring_, a_over_g, row);
      add_scaled(ring_, rest, mpz_class(-p_over_g), v);
      row = std::move(combined);
      v = std::move(rest);
    }
    // restore reduced entries above the pivots
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t c = pivots_[i];
      for (std::size_t k = 0; k < i; ++k) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows_[k][c].get_mpz_t(), rows_[i][c].get_mpz_t());
        if (q != 0) add_scaled(ring_, rows_[k], mpz_class(-q), rows_[i]);
      }
    }
  }

  Ring ring_;
  std::size_t dim_;
  std::vector<Vec<Ring>> rows_;
  std::vector<std::size_t> pivots_;
};

template <class Ring>
Submodule<Ring> span(const Ring& ring, std::size_t dim, const std::vector<Vec<Ring>>& generators) {
  return Submodule<Ring>::span(ring, dim, generators);
}

/// Kernel {v : M v = 0} of the matrix with the given rows, as a canonical submodule of R^cols.
/// Over Z this is the kernel lattice, read off the Hermite form of [M^T | I].
template <class Ring>
Submodule<Ring> kernel(const Ring& ring, std::size_t cols, const std::vector<Vec<Ring>>& rows) {
  require_linear_algebra(ring);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DomainError("kernel: ragged matrix");
  }
  if constexpr (Ring::is_integer_ring) {
    const std::size_t m = rows.size();
    Submodule<Ring> aug(ring, m + cols);
    for (std::size_t j = 0; j < cols; ++j) {
      Vec<Ring> w(m + cols, ring.zero());
      for (std::size_t i = 0; i < m; ++i) w[i] = rows[i][j];
      w[m + j] = ring.one();
      aug.insert(std::move(w));
    }
    Submodule<Ring> ker(ring, cols);
    for (std::size_t r = 0; r < aug.rank(); ++r) {
      if (aug.pivots()[r] < m) continue;
      ker.insert(Vec<Ring>(aug.basis()[r].begin() + static_cast<std::ptrdiff_t>(m), aug.basis()[r].end()));
    }
    return ker;
  } else {
    auto rref = Submodule<Ring>::span(ring, cols, rows);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : rref.pivots()) is_pivot[p] = true;
    Submodule<Ring> ker(ring, cols);
    for (std::size_t f = 0; f < cols; ++f) {
      if (is_pivot[f]) continue;
      Vec<Ring> v(cols, ring.zero());
      v[f] = ring.one();
      for (std::size_t r = 0; r < rref.rank(); ++r) v[rref.pivots()[r]] = ring.neg(rref.basis()[r][f]);
      ker.insert(std::move(v));
    }
    return ker;
  }
}

namespace detail {

inline Vec<Rationals> to_rational(const Vec<Integers>& v) {
  return Vec<Rationals>(v.begin(), v.end());
}

template <class Ring>
std::optional<Vec<Ring>> solve_left_field(const Ring& ring, const std::vector<Vec<Ring>>& family,
                                          const Vec<Ring>& target) {
  // Rows of the augmented transpose: one equation per ambient coordinate.
  const std::size_t k = family.size();
  std::vector<Vec<Ring>> eqs;
  eqs.reserve(target.size());
  for (std::size_t c = 0; c < target.size(); ++c) {
    Vec<Ring> e(k + 1, ring.zero());
    for (std::size_t i = 0; i < k; ++i) e[i] = family[i][c];
    e[k] = target[c];
    eqs.push_back(std::move(e));
  }
  auto rref = Submodule<Ring>::span(ring, k + 1, eqs);
  Vec<Ring> x(k, ring.zero());
  for (std::size_t r = 0; r < rref.rank(); ++r) {
    if (rref.pivots()[r] == k) return std::nullopt;
    x[rref.pivots()[r]] = rref.basis()[r][k];
  }
  return x;
}

}  // namespace detail

/// Some x with sum_i x_i family[i] = target, or nullopt if none exists.
/// Over Z the solution must be integral and is found through Q, so `family`
/// should be linearly independent there.
template <class Ring>
std::optional<Vec<Ring>> solve_left(const Ring& ring, const std::vector<Vec<Ring>>& family,
                                    const Vec<Ring>& target) {
  if constexpr (Ring::is_integer_ring) {
    std::vector<Vec<Rationals>> fam;
    for (const auto& f : family) fam.push_back(detail::to_rational(f));
    auto x = detail::solve_left_field(Rationals{}, fam, detail::to_rational(target));
    if (!x) return std::nullopt;
    Vec<Ring> out;
    for (const auto& q : *x) {
      if (q.get_den() != 1) return std::nullopt;
      out.push_back(q.get_num());
    }
    return out;
  } else {
    require_field(ring, "solve_left");
    return detail::solve_left_field(ring, family, target);
  }
}

/// Rank over the fraction field (Q for Z).
template <class Ring>
std::size_t rank_of(const Ring& ring, std::size_t dim, const std::vector<Vec<Ring>>& rows) {
  if constexpr (Ring::is_integer_ring) {
    std::vector<Vec<Rationals>> q;
    for (const auto& r : rows) q.push_back(detail::to_rational(r));
    return Submodule<Rationals>::span(Rationals{}, dim, q).rank();
  } else {
    return Submodule<Ring>::span(ring, dim, rows).rank();
  }
}

/// A linear map between free modules, stored by the images of the basis vectors.
template <class Ring>
class LinearMap {
 public:
  LinearMap(Ring ring, std::size_t domain_dim, std::size_t codomain_dim)
      : ring_(std::move(ring)), codomain_dim_(codomain_dim),
        columns_(domain_dim, zero_vector(ring_, codomain_dim)) {}

  LinearMap(Ring ring, std::size_t codomain_dim, std::vector<Vec<Ring>> columns)
      : ring_(std::move(ring)), codomain_dim_(codomain_dim), columns_(std::move(columns)) {
    for (const auto& c : columns_) {
      if (c.size() != codomain_dim_) throw DomainError("LinearMap: column of wrong length");
    }
  }

  static LinearMap identity(const Ring& ring, std::size_t dim) {
    LinearMap m(ring, dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m.columns_[i][i] = ring.one();
    return m;
  }

  const Ring& ring() const { return ring_; }
  std::size_t domain_dim() const { return columns_.size(); }
  std::size_t codomain_dim() const { return codomain_dim_; }
  const Vec<Ring>& image(std::size_t j) const { return columns_[j]; }
  Vec<Ring>& image(std::size_t j) { return columns_[j]; }
  const std::vector<Vec<Ring>>& columns() const { return columns_; }

  /// Matrix entry: coefficient of target basis vector i in the image of source basis vector j.
  const typename Ring::value_type& at(std::size_t i, std::size_t j) const { return columns_[j][i]; }

  Vec<Ring> apply(const Vec<Ring>& v) const {
    if (v.size() != domain_dim()) throw DomainError("LinearMap::apply: dimension mismatch");
    Vec<Ring> out = zero_vector(ring_, codomain_dim_);
    for (std::size_t j = 0; j < v.size(); ++j) add_scaled(ring_, out, v[j], columns_[j]);
    return out;
  }

  /// (*this) o inner
  LinearMap compose(const LinearMap& inner) const {
    if (inner.codomain_dim() != domain_dim()) throw DomainError("LinearMap::compose: dimension mismatch");
    std::vector<Vec<Ring>> cols;
    cols.reserve(inner.domain_dim());
    for (const auto& c : inner.columns_) cols.push_back(apply(c));
    return LinearMap(ring_, codomain_dim_, std::move(cols));
  }

  bool is_zero() const {
    return std::all_of(columns_.begin(), columns_.end(), [&](const auto& c) { return is_zero_vector(ring_, c); });
  }

  bool operator==(const LinearMap& o) const {
    return codomain_dim_ == o.codomain_dim_ && columns_ == o.columns_;
  }

 private:
  Ring ring_;
  std::size_t codomain_dim_;
  std::vector<Vec<Ring>> columns_;
};

/// Inverse of a square map, or nullopt when it is not invertible over the ring.
template <class Ring>
std::optional<LinearMap<Ring>> inverse(const LinearMap<Ring>& m) {
  const auto& ring = m.ring();
  const std::size_t d = m.domain_dim();
  if (m.codomain_dim() != d) return std::nullopt;
  // Solve M x = e_i for every i: rows of M^T are the columns of M.
  std::vector<Vec<Ring>> cols;
  for (std::size_t i = 0; i < d; ++i) {
    auto x = solve_left(ring, m.columns(), unit_vector(ring, d, i));
    if (!x) return std::nullopt;
    cols.push_back(std::move(*x));
  }
  LinearMap<Ring> inv(ring, d, std::move(cols));
  if (!(inv.compose(m) == LinearMap<Ring>::identity(ring, d))) return std::nullopt;
  return inv;
}

}  // namespace flagalg
