#pragma once

// Anonymous finite free algebras given by structure constants
// b_i * b_j = sum_k c_ij^k b_k.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/linalg.hpp"

namespace flagalg {

template <class Ring>
struct Term {
  std::size_t index;
  typename Ring::value_type coeff;
  bool operator==(const Term&) const = default;
};

template <class Ring>
using SparseVec = std::vector<Term<Ring>>;

template <class Ring>
class StructureConstants {
 public:
  StructureConstants(Ring ring, std::size_t dim) : ring_(std::move(ring)), dim_(dim), table_(dim * dim) {}

  const Ring& ring() const { return ring_; }
  std::size_t dim() const { return dim_; }

  /// Sparse product b_i * b_j, sorted by index, nonzero coefficients only.
  const SparseVec<Ring>& product(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }

  void set_product(std::size_t i, std::size_t j, SparseVec<Ring> terms) {
    if (i >= dim_ || j >= dim_) throw DomainError("structure constant index out of range");
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (terms[t].index >= dim_) throw DomainError("structure constant target out of range");
      if (ring_.is_zero(terms[t].coeff)) throw DomainError("structure constants must be nonzero");
      if (t > 0 && terms[t].index == terms[t - 1].index) throw DomainError("repeated structure constant target");
    }
    table_[i * dim_ + j] = std::move(terms);
  }

  void set_product(std::size_t i, std::size_t j, const Vec<Ring>& dense) {
    SparseVec<Ring> terms;
    for (std::size_t k = 0; k < dense.size(); ++k) {
      if (!ring_.is_zero(dense[k])) terms.push_back({k, dense[k]});
    }
    set_product(i, j, std::move(terms));
  }

  Vec<Ring> product_vector(std::size_t i, std::size_t j) const {
    Vec<Ring> out = zero_vector(ring_, dim_);
    for (const auto& t : product(i, j)) out[t.index] = t.coeff;
    return out;
  }

  Vec<Ring> multiply(const Vec<Ring>& u, const Vec<Ring>& v) const {
    check(u);
    check(v);
    Vec<Ring> out = zero_vector(ring_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (ring_.is_zero(u[i])) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (ring_.is_zero(v[j])) continue;
        const auto uv = ring_.mul(u[i], v[j]);
        for (const auto& t : product(i, j)) out[t.index] = ring_.add(out[t.index], ring_.mul(uv, t.coeff));
      }
    }
    return out;
  }

  /// Columns of left multiplication by u: column j is u * b_j.
  std::vector<Vec<Ring>> left_operator(const Vec<Ring>& u) const {
    check(u);
    std::vector<Vec<Ring>> cols(dim_, zero_vector(ring_, dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
      if (ring_.is_zero(u[i])) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        for (const auto& t : product(i, j)) {
          cols[j][t.index] = ring_.add(cols[j][t.index], ring_.mul(u[i], t.coeff));
        }
      }
    }
    return cols;
  }

  bool is_commutative() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i + 1; j < dim_; ++j) {
        if (!(product(i, j) == product(j, i))) return false;
      }
    }
    return true;
  }

  bool operator==(const StructureConstants& o) const {
    return ring_ == o.ring_ && dim_ == o.dim_ && table_ == o.table_;
  }

 private:
  void check(const Vec<Ring>& v) const {
    if (v.size() != dim_) throw DomainError("vector does not match algebra dimension");
  }

  Ring ring_;
  std::size_t dim_;
  std::vector<SparseVec<Ring>> table_;
};

/// Applies a cached left operator (from StructureConstants::left_operator) to v.
template <class Ring>
Vec<Ring> apply_columns(const Ring& ring, const std::vector<Vec<Ring>>& cols, const Vec<Ring>& v) {
  Vec<Ring> out = zero_vector(ring, cols.empty() ? 0 : cols.front().size());
  for (std::size_t j = 0; j < v.size(); ++j) add_scaled(ring, out, v[j], cols[j]);
  return out;
}

/// Structure constants of the same algebra in the basis {T b_k}:
/// c'_ij = T^{-1}((T b_i)(T b_j)). Throws DomainError if T is not invertible.
template <class Ring>
StructureConstants<Ring> transport(const StructureConstants<Ring>& table, const LinearMap<Ring>& t) {
  const auto& ring = table.ring();
  const std::size_t d = table.dim();
  if (t.domain_dim() != d || t.codomain_dim() != d) throw DomainError("transport: dimension mismatch");
  auto t_inv = inverse(t);
  if (!t_inv) throw DomainError("transport: map is not invertible");
  std::vector<std::vector<Vec<Ring>>> left;
  left.reserve(d);
  for (std::size_t i = 0; i < d; ++i) left.push_back(table.left_operator(t.image(i)));
  StructureConstants<Ring> out(ring, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.set_product(i, j, t_inv->apply(apply_columns(ring, left[i], t.image(j))));
    }
  }
  return out;
}

}  // namespace flagalg
