#pragma once

// The n-th partial flag incidence algebra I^n(P, R): functions on the
// multichains of P with the convolution product
//   (fg)(x) = sum over y in I(x) of f(x_1, y) g(y, x_n),
// where I(x) = [x_1, x_2] x ... x [x_{n-1}, x_n].

#include <algorithm>
#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/linalg.hpp"
#include "flagalg/poset.hpp"
#include "flagalg/structure_constants.hpp"

namespace flagalg {

namespace detail {

// Cartesian product [t_0, t_1] x [t_1, t_2] x ... of consecutive intervals of t.
inline std::vector<MultiChain> interval_product(const Poset& p, const std::vector<Element>& t) {
  std::vector<MultiChain> out{MultiChain{}};
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    auto iv = p.interval(t[k], t[k + 1]);
    std::vector<MultiChain> next;
    next.reserve(out.size() * iv.size());
    for (const auto& prefix : out) {
      for (auto z : iv) {
        MultiChain c = prefix;
        c.entries.push_back(z);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// An immutable I^n(P, R) with its basis, interval caches and structure constants.
template <class Ring>
class AlgebraContext {
 public:
  using value_type = typename Ring::value_type;

  static std::shared_ptr<const AlgebraContext> make(Poset poset, std::size_t n, Ring ring) {
    return std::shared_ptr<const AlgebraContext>(new AlgebraContext(std::move(poset), n, std::move(ring)));
  }

  const Poset& poset() const { return poset_; }
  std::size_t order() const { return n_; }
  const Ring& ring() const { return ring_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<MultiChain>& basis() const { return basis_; }
  const MultiChain& tuple(std::size_t i) const { return basis_.at(i); }

  std::optional<std::size_t> index_of(const MultiChain& x) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), x);
    if (it == basis_.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - basis_.begin());
  }

  std::size_t index_of(std::vector<Element> entries) const {
    auto idx = index_of(MultiChain{std::move(entries)});
    if (!idx) throw DomainError("tuple is not a multichain of this poset");
    return *idx;
  }

  /// I(x) for the basis tuple with index i.
  const std::vector<MultiChain>& interval_product(std::size_t i) const { return intervals_.at(i); }

  /// Index pairs (idx(x_1, y), idx(y, x_n)) for y in I(x), aligned with interval_product(i).
  const std::vector<std::pair<std::size_t, std::size_t>>& convolution_terms(std::size_t i) const {
    return terms_.at(i);
  }

  const StructureConstants<Ring>& structure_constants() const { return table_; }

  /// l(x_1, x_n) for the basis tuple with index i.
  std::size_t span_length(std::size_t i) const { return poset_.length(basis_[i].front(), basis_[i].back()); }

  bool same_algebra(const AlgebraContext& o) const {
    return this == &o || (n_ == o.n_ && ring_ == o.ring_ && poset_ == o.poset_);
  }

 private:
  AlgebraContext(Poset poset, std::size_t n, Ring ring)
      : poset_(std::move(poset)), n_(n), ring_(std::move(ring)), table_(ring_, 0) {
    if (n_ < 2) throw DomainError("flag order n must be at least 2");
    basis_ = multichains(poset_, n_);
    intervals_.reserve(basis_.size());
    terms_.reserve(basis_.size());
    for (const auto& x : basis_) {
      auto iv = detail::interval_product(poset_, x.entries);
      std::vector<std::pair<std::size_t, std::size_t>> t;
      t.reserve(iv.size());
      for (const auto& y : iv) {
        std::vector<Element> left{x.front()}, right = y.entries;
        left.insert(left.end(), y.entries.begin(), y.entries.end());
        right.push_back(x.back());
        t.emplace_back(index_of(std::move(left)), index_of(std::move(right)));
      }
      intervals_.push_back(std::move(iv));
      terms_.push_back(std::move(t));
    }
    table_ = StructureConstants<Ring>(ring_, basis_.size());
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = 0; j < dim(); ++j) table_.set_product(i, j, closed_form_product(i, j));
    }
  }

  // e_x e_y = sum over z in I(u) of e_(x_1, z, y_n) when x = (x_1, u), y = (u, y_n); zero otherwise.
  SparseVec<Ring> closed_form_product(std::size_t i, std::size_t j) const {
    const auto& x = basis_[i].entries;
    const auto& y = basis_[j].entries;
    if (!std::equal(x.begin() + 1, x.end(), y.begin(), y.end() - 1)) return {};
    std::vector<Element> u(x.begin() + 1, x.end());
    SparseVec<Ring> out;
    for (const auto& z : detail::interval_product(poset_, u)) {
      std::vector<Element> t{x.front()};
      t.insert(t.end(), z.entries.begin(), z.entries.end());
      t.push_back(y.back());
      out.push_back({index_of(std::move(t)), ring_.one()});
    }
    return out;
  }

  Poset poset_;
  std::size_t n_;
  Ring ring_;
  std::vector<MultiChain> basis_;
  std::vector<std::vector<MultiChain>> intervals_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> terms_;
  StructureConstants<Ring> table_;
};

template <class Ring>
using ContextPtr = std::shared_ptr<const AlgebraContext<Ring>>;

/// An element of I^n(P, R), stored sparsely by basis index.
template <class Ring>
class FlagElement {
 public:
  using value_type = typename Ring::value_type;

  explicit FlagElement(ContextPtr<Ring> ctx) : ctx_(std::move(ctx)) {}

  static FlagElement from_dense(ContextPtr<Ring> ctx, const Vec<Ring>& v) {
    if (v.size() != ctx->dim()) throw DomainError("dense vector does not match algebra dimension");
    FlagElement f(std::move(ctx));
    const auto& ring = f.ring();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!ring.is_zero(v[i])) f.terms_.push_back({i, v[i]});
    }
    return f;
  }

  const AlgebraContext<Ring>& context() const { return *ctx_; }
  const ContextPtr<Ring>& context_ptr() const { return ctx_; }
  const Ring& ring() const { return ctx_->ring(); }
  const SparseVec<Ring>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  value_type coefficient(std::size_t index) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const auto& t, std::size_t i) { return t.index < i; });
    return it != terms_.end() && it->index == index ? it->coeff : ring().zero();
  }

  /// f(x); zero for tuples that are not multichains.
  value_type operator()(const MultiChain& x) const {
    auto idx = ctx_->index_of(x);
    return idx ? coefficient(*idx) : ring().zero();
  }

  void set(std::size_t index, const value_type& value) {
    if (index >= ctx_->dim()) throw DomainError("basis index out of range");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const auto& t, std::size_t i) { return t.index < i; });
    const bool present = it != terms_.end() && it->index == index;
    if (ring().is_zero(value)) {
      if (present) terms_.erase(it);
    } else if (present) {
      it->coeff = value;
    } else {
      terms_.insert(it, {index, value});
    }
  }

  Vec<Ring> dense() const {
    Vec<Ring> v = zero_vector(ring(), ctx_->dim());
    for (const auto& t : terms_) v[t.index] = t.coeff;
    return v;
  }

  FlagElement operator+(const FlagElement& o) const { return combine(o, false); }
  FlagElement operator-(const FlagElement& o) const { return combine(o, true); }

  FlagElement scaled(const value_type& c) const {
    FlagElement out(ctx_);
    for (const auto& t : terms_) {
      auto v = ring().mul(c, t.coeff);
      if (!ring().is_zero(v)) out.terms_.push_back({t.index, v});
    }
    return out;
  }

  bool operator==(const FlagElement& o) const {
    return ctx_->same_algebra(*o.ctx_) && terms_ == o.terms_;
  }

  void require_same_context(const FlagElement& o) const {
    if (!ctx_->same_algebra(*o.ctx_)) throw DomainError("elements belong to different algebras");
  }

 private:
  FlagElement combine(const FlagElement& o, bool subtract) const {
    require_same_context(o);
    const auto& r = ring();
    FlagElement out(ctx_);
    std::size_t a = 0, b = 0;
    while (a < terms_.size() || b < o.terms_.size()) {
      if (b == o.terms_.size() || (a < terms_.size() && terms_[a].index < o.terms_[b].index)) {
        out.terms_.push_back(terms_[a++]);
      } else {
        auto c = subtract ? r.neg(o.terms_[b].coeff) : o.terms_[b].coeff;
        std::size_t idx = o.terms_[b].index;
        if (a < terms_.size() && terms_[a].index == idx) c = r.add(terms_[a++].coeff, c);
        ++b;
        if (!r.is_zero(c)) out.terms_.push_back({idx, c});
      }
    }
    return out;
  }

  ContextPtr<Ring> ctx_;
  SparseVec<Ring> terms_;
};

/// The indicator function e_x of a multichain.
template <class Ring>
FlagElement<Ring> basis_element(const ContextPtr<Ring>& ctx, const MultiChain& x) {
  auto idx = ctx->index_of(x);
  if (!idx) throw DomainError("basis_element: tuple is not a weakly increasing multichain");
  FlagElement<Ring> f(ctx);
  f.set(*idx, ctx->ring().one());
  return f;
}

template <class Ring>
FlagElement<Ring> basis_element(const ContextPtr<Ring>& ctx, std::size_t index) {
  FlagElement<Ring> f(ctx);
  f.set(index, ctx->ring().one());
  return f;
}

/// Pointwise convolution product.
template <class Ring>
FlagElement<Ring> convolve(const FlagElement<Ring>& f, const FlagElement<Ring>& g) {
  f.require_same_context(g);
  const auto& ctx = f.context();
  const auto& ring = ctx.ring();
  const Vec<Ring> fd = f.dense(), gd = g.dense();
  Vec<Ring> out = zero_vector(ring, ctx.dim());
  if (f.is_zero() || g.is_zero()) return FlagElement<Ring>(f.context_ptr());
  for (std::size_t x = 0; x < ctx.dim(); ++x) {
    for (auto [l, r] : ctx.convolution_terms(x)) {
      if (ring.is_zero(fd[l]) || ring.is_zero(gd[r])) continue;
      out[x] = ring.add(out[x], ring.mul(fd[l], gd[r]));
    }
  }
  return FlagElement<Ring>::from_dense(f.context_ptr(), out);
}

/// Closed-form product of two basis elements.
template <class Ring>
FlagElement<Ring> basis_product(const ContextPtr<Ring>& ctx, const MultiChain& x, const MultiChain& y) {
  auto i = ctx->index_of(x), j = ctx->index_of(y);
  if (!i || !j) throw DomainError("basis_product: tuple is not a multichain");
  FlagElement<Ring> out(ctx);
  for (const auto& t : ctx->structure_constants().product(*i, *j)) out.set(t.index, t.coeff);
  return out;
}

template <class Ring>
FlagElement<Ring> commutator(const FlagElement<Ring>& f, const FlagElement<Ring>& g) {
  return convolve(f, g) - convolve(g, f);
}

template <class Ring>
struct PowerAssociativityWitness {
  Element lower, upper;
  FlagElement<Ring> f, f_times_ff, ff_times_f;
};

/// For n >= 3 and P not an antichain, the element
/// f = e_(x^n) + e_(x^(n-1), y) + e_(x^(n-2), y, y) for the least comparable pair x < y,
/// together with f(ff) and (ff)f, which differ. Absent for antichains.
template <class Ring>
std::optional<PowerAssociativityWitness<Ring>> power_assoc_witness(const ContextPtr<Ring>& ctx) {
  const std::size_t n = ctx->order();
  if (n < 3) throw DomainError("power_assoc_witness requires n >= 3");
  const auto& p = ctx->poset();
  for (Element x = 0; x < p.size(); ++x) {
    for (Element y = 0; y < p.size(); ++y) {
      if (!p.less(x, y)) continue;
      std::vector<Element> a(n, x), b(n, x), c(n, x);
      b[n - 1] = y;
      c[n - 1] = c[n - 2] = y;
      auto f = basis_element(ctx, MultiChain{a}) + basis_element(ctx, MultiChain{b}) +
               basis_element(ctx, MultiChain{c});
      auto ff = convolve(f, f);
      auto left = convolve(f, ff), right = convolve(ff, f);
      if (left == right) throw Error("power_assoc_witness: f(ff) == (ff)f, product is broken");
      return PowerAssociativityWitness<Ring>{x, y, f, left, right};
    }
  }
  return std::nullopt;
}

/// A basis triple (i, j, k) with (b_i b_j) b_k != b_i (b_j b_k), if any.
template <class Ring>
std::optional<std::array<std::size_t, 3>> associativity_counterexample(const StructureConstants<Ring>& table) {
  const std::size_t d = table.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto ij = table.product_vector(i, j);
      for (std::size_t k = 0; k < d; ++k) {
        const auto jk = table.product_vector(j, k);
        if (table.multiply(ij, unit_vector(table.ring(), d, k)) != table.multiply(unit_vector(table.ring(), d, i), jk)) {
          return std::array<std::size_t, 3>{i, j, k};
        }
      }
    }
  }
  return std::nullopt;
}

enum class Side { left, right };

/// Whether e b = b for all b (left) or b e = b (right) has a solution, decided
/// over the fraction field of the coefficient ring.
template <class Ring>
bool has_one_sided_identity(const StructureConstants<Ring>& table, Side side) {
  const auto& ring = table.ring();
  const std::size_t d = table.dim();
  std::vector<Vec<Ring>> family(d, zero_vector(ring, d * d));
  Vec<Ring> target = zero_vector(ring, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto& prod = side == Side::left ? table.product(i, j) : table.product(j, i);
      for (const auto& t : prod) family[i][j * d + t.index] = t.coeff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) target[j * d + j] = ring.one();
  auto extended = family;
  extended.push_back(target);
  return rank_of(ring, d * d, family) == rank_of(ring, d * d, extended);
}

}  // namespace flagalg
