#pragma once

// Recovering a poset from anonymous structure constants of an algebra
// isomorphic to I^3(P, R), and the isomorphisms induced by poset isomorphisms.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/flag_algebra.hpp"
#include "flagalg/linalg.hpp"
#include "flagalg/poset.hpp"
#include "flagalg/structure_constants.hpp"
#include "flagalg/submodule_lattice.hpp"

namespace flagalg {

/// Structure constants with no poset attached, over an indecomposable ring.
template <class Ring>
class AbstractAlgebra {
 public:
  explicit AbstractAlgebra(StructureConstants<Ring> table)
      : table_(std::make_shared<const StructureConstants<Ring>>(std::move(table))) {
    if (!table_->ring().is_indecomposable()) {
      throw CapabilityError("ring " + table_->ring().name() + " is decomposable; reconstruction needs an indecomposable ring");
    }
  }

  const StructureConstants<Ring>& table() const { return *table_; }
  const TablePtr<Ring>& table_ptr() const { return table_; }
  const Ring& ring() const { return table_->ring(); }
  std::size_t dim() const { return table_->dim(); }

 private:
  TablePtr<Ring> table_;
};

template <class Ring>
AbstractAlgebra<Ring> forget_poset(const ContextPtr<Ring>& ctx) {
  return AbstractAlgebra<Ring>(ctx->structure_constants());
}

/// A random invertible map P L U: a permutation times unit lower and unit upper
/// triangular factors with entries in {-1, 0, 1}. Deterministic per seed.
template <class Ring>
LinearMap<Ring> random_invertible_map(const Ring& ring, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto entry = [&] { return ring.from_int(std::uniform_int_distribution<int>(-1, 1)(rng)); };
  LinearMap<Ring> lower = LinearMap<Ring>::identity(ring, d), upper = LinearMap<Ring>::identity(ring, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = j + 1; i < d; ++i) lower.image(j)[i] = entry();
    for (std::size_t i = 0; i < j; ++i) upper.image(j)[i] = entry();
  }
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  LinearMap<Ring> permutation(ring, d, d);
  for (std::size_t j = 0; j < d; ++j) permutation.image(j)[perm[j]] = ring.one();
  return permutation.compose(lower.compose(upper));
}

/// I^n(P, R) re-expressed in the basis {T b_k} for a seeded random invertible T.
template <class Ring>
AbstractAlgebra<Ring> scramble(const ContextPtr<Ring>& ctx, std::uint64_t seed) {
  require_field(ctx->ring(), "scramble");
  auto t = random_invertible_map(ctx->ring(), ctx->dim(), seed);
  return AbstractAlgebra<Ring>(transport(ctx->structure_constants(), t));
}

struct StageRanks {
  std::size_t dim = 0, c1 = 0, c2 = 0, c3 = 0, elements = 0, covers = 0;
};

template <class Ring>
struct Reconstruction {
  Poset poset;
  /// Representatives of the primitive idempotents of A/C1; index = poset element.
  std::vector<Vec<Ring>> element_idempotents;
  /// Representatives of the primitive idempotents of C2/C3, aligned with `edges`.
  std::vector<Vec<Ring>> cover_idempotents;
  std::vector<Cover> edges;
  StageRanks ranks;
};

/// Recovers P (up to isomorphism) from an algebra isomorphic to I^3(P, F).
///
/// Elements are the primitive idempotents of A/[A,A]; covers are the primitive
/// idempotents f of C2/C3, where C2 = [C1,C1] and C3 = [C2,C2]. A cover f runs
/// from x to y when e_x f and f e_y are nonzero modulo C2 (for lifted
/// representatives), and P is the reflexive-transitive closure of the covers.
template <class Ring>
Reconstruction<Ring> reconstruct_poset(const AbstractAlgebra<Ring>& a, std::uint64_t seed = 0) {
  const auto& ring = a.ring();
  if (!ring.is_field()) {
    throw CapabilityError("reconstruction needs a field; re-run over Q instead of " + ring.name());
  }
  const auto& table = a.table();
  auto whole = AlgebraSubmodule<Ring>::whole(a.table_ptr());
  auto chain = commutator_chain(a.table_ptr());

  // Representative independence of the endpoint test.
  if (!product_within(chain.c1, chain.c2, chain.c2) || !product_within(chain.c2, chain.c1, chain.c2)) {
    throw ReconstructionError("C1 C2 is not contained in C2: input is not a third flag algebra");
  }
  if (!product_within(whole, chain.c3, chain.c2) || !product_within(chain.c3, whole, chain.c2)) {
    throw ReconstructionError("A C3 is not contained in C2: input is not a third flag algebra");
  }

  Reconstruction<Ring> out;
  out.ranks = {table.dim(), chain.c1.rank(), chain.c2.rank(), chain.c3.rank(), 0, 0};
  std::vector<Vec<Ring>> element_idem, cover_idem;
  try {
    auto q1 = quotient(whole, chain.c1, seed);
    for (const auto& e : primitive_idempotents(q1, seed)) out.element_idempotents.push_back(q1.lift(e));
    auto q2 = quotient(chain.c2, chain.c3, seed);
    for (const auto& f : primitive_idempotents(q2, seed + 1)) cover_idem.push_back(q2.lift(f));
  } catch (const DomainError& e) {
    throw ReconstructionError(std::string("quotient construction failed: ") + e.what());
  } catch (const SplittingError& e) {
    throw ReconstructionError(std::string("idempotent decomposition failed: ") + e.what());
  }
  const std::size_t m = out.element_idempotents.size();
  out.ranks.elements = m;
  out.ranks.covers = cover_idem.size();

  std::vector<std::vector<Vec<Ring>>> left_e;
  for (const auto& e : out.element_idempotents) left_e.push_back(table.left_operator(e));
  std::set<Cover> seen;
  for (std::size_t c = 0; c < cover_idem.size(); ++c) {
    const auto& f = cover_idem[c];
    const auto left_f = table.left_operator(f);
    std::vector<Element> sources, targets;
    for (Element x = 0; x < m; ++x) {
      if (!chain.c2.contains(apply_columns(ring, left_e[x], f))) sources.push_back(x);
      if (!chain.c2.contains(apply_columns(ring, left_f, out.element_idempotents[x]))) targets.push_back(x);
    }
    if (sources.size() != 1 || targets.size() != 1) {
      throw ReconstructionError("cover idempotent " + std::to_string(c) + " has " + std::to_string(sources.size()) +
                                " sources and " + std::to_string(targets.size()) + " targets (expected one each)");
    }
    Cover edge{sources[0], targets[0]};
    if (edge.first == edge.second) throw ReconstructionError("cover idempotent attaches to a single element");
    if (!seen.insert(edge).second) throw ReconstructionError("two cover idempotents share the same endpoints");
    out.edges.push_back(edge);
    out.cover_idempotents.push_back(f);
  }

  try {
    out.poset = Poset::from_covers(Poset::default_names(m), out.edges);
  } catch (const DomainError& e) {
    throw ReconstructionError(std::string("cover closure is not antisymmetric: ") + e.what());
  }
  if (std::set<Cover>(out.poset.covers().begin(), out.poset.covers().end()) != seen) {
    throw ReconstructionError("a recovered cover is implied by a longer chain");
  }
  return out;
}

/// The basis permutation e_(x_1..x_n) -> e_(phi x_1..phi x_n) of an order isomorphism.
template <class Ring>
LinearMap<Ring> induced_isomorphism(const Bijection& phi, const ContextPtr<Ring>& p, const ContextPtr<Ring>& q) {
  if (!(p->ring() == q->ring()) || p->order() != q->order()) {
    throw DomainError("induced_isomorphism: algebras differ in ring or flag order");
  }
  if (!is_order_isomorphism(p->poset(), q->poset(), phi)) {
    throw DomainError("induced_isomorphism: map is not an order isomorphism");
  }
  LinearMap<Ring> out(p->ring(), p->dim(), q->dim());
  for (std::size_t i = 0; i < p->dim(); ++i) {
    std::vector<Element> image;
    for (auto x : p->tuple(i).entries) image.push_back(phi[x]);
    out.image(i)[q->index_of(std::move(image))] = p->ring().one();
  }
  return out;
}

/// Whether T : A -> B is invertible and multiplicative on basis pairs.
template <class Ring>
bool is_algebra_isomorphism(const LinearMap<Ring>& t, const StructureConstants<Ring>& a,
                            const StructureConstants<Ring>& b) {
  if (t.domain_dim() != a.dim() || t.codomain_dim() != b.dim() || a.dim() != b.dim()) {
    throw DomainError("is_algebra_isomorphism: dimension mismatch");
  }
  if (!inverse(t)) return false;
  const auto& ring = a.ring();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const auto left = b.left_operator(t.image(i));
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (t.apply(a.product_vector(i, j)) != apply_columns(ring, left, t.image(j))) return false;
    }
  }
  return true;
}

template <class Ring>
bool is_algebra_isomorphism(const LinearMap<Ring>& t, const AbstractAlgebra<Ring>& a, const AbstractAlgebra<Ring>& b) {
  return is_algebra_isomorphism(t, a.table(), b.table());
}

/// Reconstructs both posets and returns an isomorphism between them, if any.
/// The bijection maps element indices of the first reconstruction to the second.
template <class Ring>
std::optional<Bijection> decide_isomorphism(const AbstractAlgebra<Ring>& a, const AbstractAlgebra<Ring>& b,
                                            std::uint64_t seed = 0) {
  if (a.dim() != b.dim()) return std::nullopt;
  auto ra = reconstruct_poset(a, seed);
  auto rb = reconstruct_poset(b, seed);
  return find_isomorphism(ra.poset, rb.poset);
}

inline constexpr std::size_t kExhaustiveMaxDim = 4;

/// Every algebra isomorphism A -> B over F_2 for dimension <= 4, by scanning
/// all 2^(d^2) linear maps. Ordered by the bit pattern of the matrix.
inline std::vector<LinearMap<PrimeField>> enumerate_isomorphisms_exhaustive(const ContextPtr<PrimeField>& a,
                                                                            const ContextPtr<PrimeField>& b) {
  if (a->ring().modulus() != 2 || b->ring().modulus() != 2) {
    throw CapabilityError("exhaustive isomorphism scan runs over F_2 only");
  }
  if (a->dim() > kExhaustiveMaxDim || b->dim() > kExhaustiveMaxDim) {
    throw CapabilityError("exhaustive isomorphism scan needs dimension <= 4");
  }
  if (a->dim() != b->dim()) return {};
  const std::size_t d = a->dim();
  using Mask = std::uint32_t;
  auto masks = [d](const StructureConstants<PrimeField>& t) {
    std::vector<Mask> out(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (const auto& term : t.product(i, j)) out[i * d + j] |= Mask{1} << term.index;
      }
    }
    return out;
  };
  const auto pa = masks(a->structure_constants()), pb = masks(b->structure_constants());
  const Mask column_mask = (Mask{1} << d) - 1;
  std::vector<LinearMap<PrimeField>> found;
  std::vector<Mask> col(d);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (d * d)); ++bits) {
    for (std::size_t j = 0; j < d; ++j) col[j] = static_cast<Mask>(bits >> (j * d)) & column_mask;
    // invertibility by elimination on column masks
    {
      auto m = col;
      std::size_t rank = 0;
      for (std::size_t bit = 0; bit < d; ++bit) {
        auto piv = std::find_if(m.begin() + static_cast<std::ptrdiff_t>(rank), m.end(),
                                [bit](Mask c) { return c >> bit & 1; });
        if (piv == m.end()) continue;
        std::swap(*piv, m[rank]);
        for (std::size_t r = 0; r < d; ++r) {
          if (r != rank && (m[r] >> bit & 1)) m[r] ^= m[rank];
        }
        ++rank;
      }
      if (rank != d) continue;
    }
    auto apply = [&](Mask v) {
      Mask out = 0;
      for (std::size_t k = 0; k < d; ++k) {
        if (v >> k & 1) out ^= col[k];
      }
      return out;
    };
    auto mult_b = [&](Mask u, Mask v) {
      Mask out = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (!(u >> i & 1)) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if (v >> j & 1) out ^= pb[i * d + j];
        }
      }
      return out;
    };
    bool hom = true;
    for (std::size_t i = 0; i < d && hom; ++i) {
      for (std::size_t j = 0; j < d && hom; ++j) hom = apply(pa[i * d + j]) == mult_b(col[i], col[j]);
    }
    if (!hom) continue;
    LinearMap<PrimeField> t(a->ring(), d, d);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) t.image(j)[i] = col[j] >> i & 1;
    }
    found.push_back(std::move(t));
  }
  return found;
}

}  // namespace flagalg
