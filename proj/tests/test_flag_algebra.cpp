#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "flagalg/flag_algebra.hpp"
#include "oracles.hpp"

using namespace flagalg;

namespace {

using Q = Rationals;

ContextPtr<Q> make(const Poset& p, std::size_t n) { return AlgebraContext<Q>::make(p, n, Q{}); }

FlagElement<Q> e(const ContextPtr<Q>& ctx, std::vector<Element> t) { return basis_element(ctx, MultiChain{std::move(t)}); }

FlagElement<Q> from_oracle(const ContextPtr<Q>& ctx, const oracle::Function<mpq_class>& f) {
  FlagElement<Q> out(ctx);
  for (const auto& [t, c] : f) out.set(*ctx->index_of(MultiChain{std::vector<Element>(t.begin(), t.end())}), c);
  return out;
}

oracle::Function<mpq_class> to_oracle(const FlagElement<Q>& f) {
  oracle::Function<mpq_class> out;
  for (const auto& t : f.terms()) {
    const auto& x = f.context().tuple(t.index).entries;
    out[oracle::Tuple(x.begin(), x.end())] = t.coeff;
  }
  return out;
}

}  // namespace

TEST(BasisElement, Examples) {
  auto ctx = make(Poset::chain(2), 3);
  auto b = e(ctx, {0, 0, 1});
  EXPECT_EQ(b.terms().size(), 1u);
  EXPECT_EQ(b(MultiChain{{0, 0, 1}}), 1);
  EXPECT_EQ(b(MultiChain{{0, 1, 1}}), 0);
  FlagElement<Q> sum(ctx);
  for (std::size_t i = 0; i < ctx->dim(); ++i) sum = sum + basis_element(ctx, i);
  for (std::size_t i = 0; i < ctx->dim(); ++i) EXPECT_EQ(sum.coefficient(i), 1);
  EXPECT_THROW(e(ctx, {1, 0, 0}), DomainError);
}

TEST(Convolve, Examples) {
  auto ctx = make(Poset::chain(2), 3);
  EXPECT_EQ(convolve(e(ctx, {0, 1, 1}), e(ctx, {1, 1, 1})), e(ctx, {0, 1, 1}));
  EXPECT_TRUE(convolve(FlagElement<Q>(ctx), e(ctx, {0, 1, 1})).is_zero());
  EXPECT_EQ(convolve(e(ctx, {0, 0, 1}), e(ctx, {0, 1, 1})), e(ctx, {0, 0, 1}) + e(ctx, {0, 1, 1}));
  auto other = make(Poset::chain(2), 3);
  EXPECT_THROW(convolve(e(ctx, {0, 0, 0}), basis_element(make(Poset::chain(3), 3), 0)), DomainError);
  EXPECT_NO_THROW(convolve(e(ctx, {0, 0, 0}), e(other, {0, 0, 0})));
}

TEST(BasisProduct, Examples) {
  auto ctx = make(Poset::chain(3), 3);
  EXPECT_TRUE(basis_product(ctx, MultiChain{{0, 1, 2}}, MultiChain{{0, 2, 2}}).is_zero());
  EXPECT_EQ(basis_product(ctx, MultiChain{{0, 1, 2}}, MultiChain{{1, 2, 2}}), e(ctx, {0, 1, 2}) + e(ctx, {0, 2, 2}));
  for (Element x = 0; x < 3; ++x) EXPECT_EQ(basis_product(ctx, MultiChain{{x, x, x}}, MultiChain{{x, x, x}}), e(ctx, {x, x, x}));
  // middle parts differ
  EXPECT_TRUE(basis_product(ctx, MultiChain{{0, 0, 1}}, MultiChain{{1, 2, 2}}).is_zero());
}

TEST(BasisProduct, MatchesBruteForceConvolution) {
  for (std::size_t m = 1; m <= 3; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      for (int n = 2; n <= 4; ++n) {
        auto ctx = make(p, static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < ctx->dim(); ++i) {
          for (std::size_t j = 0; j < ctx->dim(); ++j) {
            auto expect = oracle::convolve<mpq_class>(p, n, to_oracle(basis_element(ctx, i)), to_oracle(basis_element(ctx, j)));
            EXPECT_EQ(basis_product(ctx, ctx->tuple(i), ctx->tuple(j)), from_oracle(ctx, expect));
          }
        }
      }
    }
  }
}

TEST(Convolve, MatchesBruteForceOnRandomElements) {
  std::mt19937_64 rng(3);
  for (const auto& p : {fixtures::diamond(), fixtures::v_poset(), Poset::chain(3)}) {
    auto ctx = make(p, 3);
    for (int trial = 0; trial < 5; ++trial) {
      FlagElement<Q> f(ctx), g(ctx);
      for (std::size_t i = 0; i < ctx->dim(); ++i) {
        f.set(i, Q{}.sample(rng));
        g.set(i, Q{}.sample(rng));
      }
      EXPECT_EQ(convolve(f, g), from_oracle(ctx, oracle::convolve<mpq_class>(p, 3, to_oracle(f), to_oracle(g))));
    }
  }
}

TEST(Convolve, Bilinear) {
  std::mt19937_64 rng(9);
  auto ctx = make(fixtures::diamond(), 3);
  auto random = [&] {
    FlagElement<Q> f(ctx);
    for (std::size_t i = 0; i < ctx->dim(); ++i) f.set(i, Q{}.sample(rng));
    return f;
  };
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random(), g = random(), h = random();
    mpq_class a = Q{}.sample(rng), b = Q{}.sample(rng);
    EXPECT_EQ(convolve(f.scaled(a) + g.scaled(b), h), convolve(f, h).scaled(a) + convolve(g, h).scaled(b));
    EXPECT_EQ(convolve(h, f.scaled(a) + g.scaled(b)), convolve(h, f).scaled(a) + convolve(h, g).scaled(b));
  }
}

TEST(Commutator, Examples) {
  auto ctx = make(Poset::chain(2), 3);
  auto f = e(ctx, {0, 0, 1}) + e(ctx, {0, 1, 1}).scaled(3);
  EXPECT_TRUE(commutator(f, f).is_zero());
  EXPECT_EQ(commutator(e(ctx, {0, 0, 1}), e(ctx, {0, 1, 1})), e(ctx, {0, 0, 1}) + e(ctx, {0, 1, 1}));
  auto anti = make(Poset::antichain(3), 3);
  for (std::size_t i = 0; i < anti->dim(); ++i) {
    for (std::size_t j = 0; j < anti->dim(); ++j) EXPECT_TRUE(commutator(basis_element(anti, i), basis_element(anti, j)).is_zero());
  }
}

TEST(StructureConstants, Examples) {
  auto one = make(Poset::chain(1), 3)->structure_constants();
  ASSERT_EQ(one.dim(), 1u);
  ASSERT_EQ(one.product(0, 0).size(), 1u);
  EXPECT_EQ(one.product(0, 0)[0].index, 0u);
  EXPECT_EQ(one.product(0, 0)[0].coeff, 1);

  auto anti = make(Poset::antichain(2), 3)->structure_constants();
  EXPECT_EQ(anti.dim(), 2u);
  EXPECT_EQ(anti.product_vector(0, 0), (Vec<Q>{1, 0}));
  EXPECT_EQ(anti.product_vector(1, 1), (Vec<Q>{0, 1}));
  EXPECT_TRUE(anti.product(0, 1).empty());
  EXPECT_TRUE(anti.product(1, 0).empty());

  const auto p = Poset::chain(2);
  auto ctx = make(p, 3);
  const auto& table = ctx->structure_constants();
  ASSERT_EQ(table.dim(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      auto expect = oracle::convolve<mpq_class>(p, 3, to_oracle(basis_element(ctx, i)), to_oracle(basis_element(ctx, j)));
      EXPECT_EQ(table.product_vector(i, j), from_oracle(ctx, expect).dense());
    }
  }
}

TEST(PowerAssociativity, TwoChainWitness) {
  auto ctx = make(Poset::chain(2), 3);
  auto w = power_assoc_witness(ctx);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->f, e(ctx, {0, 0, 0}) + e(ctx, {0, 0, 1}) + e(ctx, {0, 1, 1}));
  EXPECT_EQ(w->f_times_ff, e(ctx, {0, 0, 0}) + e(ctx, {0, 0, 1}).scaled(3) + e(ctx, {0, 1, 1}));
  EXPECT_EQ(w->ff_times_f, e(ctx, {0, 0, 0}) + e(ctx, {0, 0, 1}).scaled(3) + e(ctx, {0, 1, 1}).scaled(2));
}

TEST(PowerAssociativity, ThreeChainDifference) {
  auto ctx = make(Poset::chain(3), 3);
  auto w = power_assoc_witness(ctx);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lower, 0u);
  EXPECT_EQ(w->upper, 1u);
  // (ff)f - f(ff) = sum over x < z <= y of e_xzy for the witness pair x < y
  EXPECT_EQ(w->ff_times_f - w->f_times_ff, e(ctx, {0, 1, 1}));
  EXPECT_FALSE((w->ff_times_f - w->f_times_ff).is_zero());
}

TEST(PowerAssociativity, AntichainsAreAssociative) {
  for (std::size_t m = 1; m <= 4; ++m) {
    auto ctx = make(Poset::antichain(m), 3);
    EXPECT_FALSE(power_assoc_witness(ctx));
    EXPECT_FALSE(associativity_counterexample(ctx->structure_constants()));
  }
  EXPECT_THROW(power_assoc_witness(make(Poset::chain(2), 2)), DomainError);
}

TEST(ClassicalIncidenceAlgebra, AssociativeAndUnital) {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      auto ctx = make(p, 2);
      EXPECT_FALSE(associativity_counterexample(ctx->structure_constants()));
      FlagElement<Q> one(ctx);
      for (Element x = 0; x < m; ++x) one = one + e(ctx, {x, x});
      for (std::size_t i = 0; i < ctx->dim(); ++i) {
        EXPECT_EQ(convolve(one, basis_element(ctx, i)), basis_element(ctx, i));
        EXPECT_EQ(convolve(basis_element(ctx, i), one), basis_element(ctx, i));
      }
    }
  }
}

TEST(OneSidedIdentity, AbsentForNonAntichains) {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const auto& p : enumerate_posets(m)) {
      auto ctx = make(p, 3);
      const auto& table = ctx->structure_constants();
      EXPECT_EQ(has_one_sided_identity(table, Side::left), p.is_antichain());
      EXPECT_EQ(has_one_sided_identity(table, Side::right), p.is_antichain());
    }
  }
}

TEST(Filtration, LowestLayerProductRule) {
  std::mt19937_64 rng(4);
  const auto p = fixtures::diamond();
  auto ctx = make(p, 3);
  for (std::size_t i = 0; i <= p.length(); ++i) {
    FlagElement<Q> f(ctx), g(ctx);
    for (std::size_t k = 0; k < ctx->dim(); ++k) {
      if (ctx->span_length(k) >= i) {
        f.set(k, Q{}.sample(rng));
        g.set(k, Q{}.sample(rng));
      }
    }
    auto fg = convolve(f, g);
    for (std::size_t k = 0; k < ctx->dim(); ++k) {
      if (ctx->span_length(k) != i) continue;
      const auto& t = ctx->tuple(k).entries;
      EXPECT_EQ(fg.coefficient(k), f(MultiChain{{t[0], t[0], t[2]}}) * g(MultiChain{{t[0], t[2], t[2]}}));
    }
  }
}

TEST(Context, Validation) {
  EXPECT_THROW(make(Poset::chain(2), 1), DomainError);
  auto ctx = make(Poset::chain(2), 3);
  EXPECT_FALSE(ctx->index_of(MultiChain{{1, 0, 0}}));
  EXPECT_THROW(ctx->index_of(std::vector<Element>{1, 0, 0}), DomainError);
  for (std::size_t i = 0; i < ctx->dim(); ++i) {
    const auto& t = ctx->tuple(i).entries;
    std::set<std::vector<Element>> expect, got;
    for (Element y = t[0]; y <= t[1]; ++y)
      for (Element z = t[1]; z <= t[2]; ++z) expect.insert({y, z});
    for (const auto& y : ctx->interval_product(i)) got.insert(y.entries);
    EXPECT_EQ(got, expect);
  }
}
