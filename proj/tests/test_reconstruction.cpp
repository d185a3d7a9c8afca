#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "flagalg/reconstruction.hpp"
#include "oracles.hpp"

using namespace flagalg;

namespace {

template <class Ring>
ContextPtr<Ring> make(const Poset& p, const Ring& ring = Ring{}) {
  return AlgebraContext<Ring>::make(p, 3, ring);
}

std::set<Cover> cover_set(const std::vector<Cover>& c) { return {c.begin(), c.end()}; }

}  // namespace

TEST(Reconstruct, CanonicalTwoChain) {
  auto ctx = make<Rationals>(Poset::chain(2));
  auto r = reconstruct_poset(forget_poset(ctx));
  EXPECT_TRUE(find_isomorphism(r.poset, Poset::chain(2)));
  EXPECT_EQ(r.edges, (std::vector<Cover>{{0, 1}}));
  // element labels are the cosets of e_000 and e_111 modulo C1
  auto c1 = z_chain(ctx).c1;
  ASSERT_EQ(r.element_idempotents.size(), 2u);
  EXPECT_TRUE(c1.contains(vec_sub(Rationals{}, r.element_idempotents[0], unit_vector(Rationals{}, 4, 0))));
  EXPECT_TRUE(c1.contains(vec_sub(Rationals{}, r.element_idempotents[1], unit_vector(Rationals{}, 4, 3))));
  EXPECT_EQ(r.ranks.dim, 4u);
  EXPECT_EQ(r.ranks.c1, 2u);
  EXPECT_EQ(r.ranks.c2, 1u);
  EXPECT_EQ(r.ranks.c3, 0u);
}

TEST(Reconstruct, ScrambledThreeChain) {
  auto ctx = make<Rationals>(Poset::chain(3));
  for (std::uint64_t seed : {1, 2, 3}) {
    auto a = scramble(ctx, seed);
    EXPECT_FALSE(a.table() == ctx->structure_constants());
    EXPECT_TRUE(find_isomorphism(reconstruct_poset(a, seed).poset, Poset::chain(3)));
  }
}

TEST(Reconstruct, Antichain) {
  for (std::size_t m = 1; m <= 4; ++m) {
    auto r = reconstruct_poset(forget_poset(make<Rationals>(Poset::antichain(m))));
    EXPECT_EQ(r.poset.size(), m);
    EXPECT_TRUE(r.edges.empty());
    EXPECT_EQ(r.ranks.c1, 0u);
  }
}

TEST(Reconstruct, CanonicalInputGivesExactCovers) {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      auto r = reconstruct_poset(forget_poset(make<Rationals>(p)));
      EXPECT_EQ(cover_set(r.edges), cover_set(p.covers()));
      auto f2 = reconstruct_poset(forget_poset(make<PrimeField>(p, PrimeField(2))));
      EXPECT_TRUE(find_isomorphism(f2.poset, p));
    }
  }
}

TEST(Reconstruct, RejectsNonFlagAlgebras) {
  StructureConstants<Rationals> t(Rationals{}, 2);
  t.set_product(0, 0, Vec<Rationals>{0, 1});
  EXPECT_THROW(reconstruct_poset(AbstractAlgebra<Rationals>(t)), ReconstructionError);
  // I^2 of a chain is associative with [A,A] = J_1, but its covers do not attach
  auto classical = AlgebraContext<Rationals>::make(Poset::chain(3), 2, Rationals{});
  EXPECT_THROW(reconstruct_poset(AbstractAlgebra<Rationals>(classical->structure_constants())), ReconstructionError);
}

TEST(Reconstruct, RingRestrictions) {
  auto z = make<Integers>(Poset::chain(2));
  EXPECT_THROW(reconstruct_poset(forget_poset(z)), CapabilityError);
  StructureConstants<IntegersMod> t(IntegersMod(6), 1);
  EXPECT_THROW(AbstractAlgebra<IntegersMod>{t}, CapabilityError);
  EXPECT_NO_THROW(AbstractAlgebra<IntegersMod>{StructureConstants<IntegersMod>(IntegersMod(4), 1)});
  EXPECT_THROW(scramble(z, 1), CapabilityError);
}

TEST(Scramble, DeterministicPerSeed) {
  auto ctx = make<Rationals>(fixtures::v_poset());
  EXPECT_TRUE(scramble(ctx, 5).table() == scramble(ctx, 5).table());
  EXPECT_FALSE(scramble(ctx, 5).table() == scramble(ctx, 6).table());
}

TEST(Scramble, IdentityAndAutomorphismTransport) {
  auto ctx = make<Rationals>(fixtures::v_poset());
  const auto& table = ctx->structure_constants();
  EXPECT_TRUE(transport(table, LinearMap<Rationals>::identity(Rationals{}, ctx->dim())) == table);
  for (const auto& phi : automorphisms(ctx->poset())) {
    EXPECT_TRUE(transport(table, induced_isomorphism(phi, ctx, ctx)) == table);
  }
}

TEST(InducedIsomorphism, Examples) {
  auto two = make<Rationals>(Poset::chain(2));
  EXPECT_EQ(induced_isomorphism({0, 1}, two, two), LinearMap<Rationals>::identity(Rationals{}, 4));

  auto anti = make<Rationals>(Poset::antichain(2));
  auto swap = induced_isomorphism({1, 0}, anti, anti);
  EXPECT_EQ(swap.image(0), (Vec<Rationals>{0, 1}));
  EXPECT_EQ(swap.image(1), (Vec<Rationals>{1, 0}));

  auto v = make<Rationals>(fixtures::v_poset());
  auto top_swap = induced_isomorphism({0, 2, 1}, v, v);
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < v->dim(); ++i) {
    const auto& t = v->tuple(i).entries;
    const bool only_bottom = t == std::vector<Element>{0, 0, 0};
    EXPECT_EQ(top_swap.image(i)[i] == 1, only_bottom);
    fixed += top_swap.image(i)[i] == 1;
  }
  EXPECT_EQ(fixed, 1u);
  EXPECT_THROW(induced_isomorphism({1, 0}, two, two), DomainError);
}

TEST(InducedIsomorphism, FunctorialAndMultiplicative) {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      auto ctx = make<Rationals>(p);
      const auto& table = ctx->structure_constants();
      const auto group = automorphisms(p);
      for (const auto& a : group) {
        auto ia = induced_isomorphism(a, ctx, ctx);
        EXPECT_TRUE(is_algebra_isomorphism(ia, table, table));
        for (const auto& b : group) {
          EXPECT_EQ(induced_isomorphism(compose(a, b), ctx, ctx), ia.compose(induced_isomorphism(b, ctx, ctx)));
        }
      }
    }
  }
}

TEST(IsAlgebraIsomorphism, Examples) {
  auto two = make<Rationals>(Poset::chain(2));
  const auto& t = two->structure_constants();
  EXPECT_FALSE(is_algebra_isomorphism(LinearMap<Rationals>(Rationals{}, 4, 4), t, t));
  EXPECT_TRUE(is_algebra_isomorphism(LinearMap<Rationals>::identity(Rationals{}, 4), t, t));
  auto anti = make<Rationals>(Poset::antichain(2));
  EXPECT_THROW(is_algebra_isomorphism(LinearMap<Rationals>::identity(Rationals{}, 4), t, anti->structure_constants()),
               DomainError);
  // scaling e_001 by 2 is invertible but not multiplicative
  auto scale = LinearMap<Rationals>::identity(Rationals{}, 4);
  scale.image(1)[1] = 2;
  EXPECT_FALSE(is_algebra_isomorphism(scale, t, t));
}

TEST(DecideIsomorphism, Examples) {
  auto v = make<Rationals>(fixtures::v_poset());
  EXPECT_TRUE(decide_isomorphism(forget_poset(v), scramble(v, 4)));
  EXPECT_FALSE(decide_isomorphism(forget_poset(make<Rationals>(Poset::chain(2))),
                                  forget_poset(make<Rationals>(Poset::antichain(2)))));
  auto lambda = make<Rationals>(fixtures::lambda_poset());
  EXPECT_EQ(v->dim(), lambda->dim());
  EXPECT_FALSE(decide_isomorphism(forget_poset(v), forget_poset(lambda)));
}

TEST(ExhaustiveIsomorphisms, Examples) {
  auto two = make<PrimeField>(Poset::chain(2), PrimeField(2));
  auto anti = make<PrimeField>(Poset::antichain(2), PrimeField(2));
  auto aut_two = enumerate_isomorphisms_exhaustive(two, two);
  ASSERT_EQ(aut_two.size(), 1u);
  EXPECT_EQ(aut_two[0], induced_isomorphism({0, 1}, two, two));
  auto aut_anti = enumerate_isomorphisms_exhaustive(anti, anti);
  ASSERT_EQ(aut_anti.size(), 2u);
  EXPECT_TRUE(enumerate_isomorphisms_exhaustive(two, anti).empty());
  EXPECT_THROW(enumerate_isomorphisms_exhaustive(make<PrimeField>(Poset::chain(3), PrimeField(2)),
                                                 make<PrimeField>(Poset::chain(3), PrimeField(2))),
               CapabilityError);
  auto f3 = make<PrimeField>(Poset::chain(1), PrimeField(3));
  EXPECT_THROW(enumerate_isomorphisms_exhaustive(f3, f3), CapabilityError);
}

TEST(ExhaustiveIsomorphisms, AgreeWithInducedMapsForAllSmallPosets) {
  for (std::size_t m = 1; m <= 2; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      auto ctx = make<PrimeField>(p, PrimeField(2));
      std::vector<LinearMap<PrimeField>> induced;
      for (const auto& phi : oracle::isomorphisms(p, p)) {
        induced.push_back(induced_isomorphism(Bijection(phi.begin(), phi.end()), ctx, ctx));
      }
      auto found = enumerate_isomorphisms_exhaustive(ctx, ctx);
      ASSERT_EQ(found.size(), induced.size());
      for (const auto& t : found) EXPECT_NE(std::find(induced.begin(), induced.end(), t), induced.end());
    }
  }
}
