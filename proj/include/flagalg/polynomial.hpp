#pragma once

// Univariate polynomials over the coefficient fields, with exact root finding:
// Sturm isolation plus simplest-fraction recovery over Q, and exhaustive
// search or Cantor-Zassenhaus splitting over F_p.

#include <algorithm>
#include <cstddef>
#include <random>
#include <type_traits>
#include <vector>

#include "flagalg/errors.hpp"
#include "flagalg/linalg.hpp"
#include "flagalg/ring.hpp"

namespace flagalg {

/// Coefficients from the constant term upward, without trailing zeros.
template <class Ring>
using Poly = std::vector<typename Ring::value_type>;

namespace poly {

template <class Ring>
Poly<Ring> trimmed(const Ring& ring, Poly<Ring> f) {
  while (!f.empty() && ring.is_zero(f.back())) f.pop_back();
  return f;
}

template <class Ring>
long degree(const Poly<Ring>& f) {
  return static_cast<long>(f.size()) - 1;
}

template <class Ring>
Poly<Ring> sub(const Ring& ring, Poly<Ring> a, const Poly<Ring>& b) {
  if (a.size() < b.size()) a.resize(b.size(), ring.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = ring.sub(a[i], b[i]);
  return trimmed(ring, std::move(a));
}

template <class Ring>
Poly<Ring> mul(const Ring& ring, const Poly<Ring>& a, const Poly<Ring>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<Ring> out(a.size() + b.size() - 1, ring.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = ring.add(out[i + j], ring.mul(a[i], b[j]));
  }
  return trimmed(ring, std::move(out));
}

template <class Ring>
Poly<Ring> scale(const Ring& ring, const typename Ring::value_type& c, Poly<Ring> f) {
  for (auto& a : f) a = ring.mul(c, a);
  return trimmed(ring, std::move(f));
}

template <class Ring>
Poly<Ring> monic(const Ring& ring, Poly<Ring> f) {
  if (f.empty()) return f;
  const auto inv = *ring.inverse(f.back());
  return scale(ring, inv, std::move(f));
}

/// Remainder of a modulo b over a field.
template <class Ring>
Poly<Ring> rem(const Ring& ring, Poly<Ring> a, const Poly<Ring>& b) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  const auto lead_inv = *ring.inverse(b.back());
  a = trimmed(ring, std::move(a));
  while (a.size() >= b.size()) {
    const auto c = ring.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ring.sub(a[shift + i], ring.mul(c, b[i]));
    a = trimmed(ring, std::move(a));
  }
  return a;
}

/// Monic gcd over a field.
template <class Ring>
Poly<Ring> gcd(const Ring& ring, Poly<Ring> a, Poly<Ring> b) {
  a = trimmed(ring, std::move(a));
  b = trimmed(ring, std::move(b));
  while (!b.empty()) {
    auto r = rem(ring, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(ring, std::move(a));
}

template <class Ring>
Poly<Ring> derivative(const Ring& ring, const Poly<Ring>& f) {
  Poly<Ring> out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(ring.mul(ring.from_int(static_cast<long long>(i)), f[i]));
  return trimmed(ring, std::move(out));
}

template <class Ring>
typename Ring::value_type eval(const Ring& ring, const Poly<Ring>& f, const typename Ring::value_type& x) {
  auto acc = ring.zero();
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = ring.add(ring.mul(acc, x), *it);
  return acc;
}

template <class Ring>
bool is_squarefree(const Ring& ring, const Poly<Ring>& f) {
  return degree<Ring>(gcd(ring, f, derivative(ring, f))) <= 0;
}

namespace detail {

inline mpq_class simplest_between(const mpq_class& lo, const mpq_class& hi) {
  mpz_class c, f;
  mpz_cdiv_q(c.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (mpq_class(c) <= hi) return mpq_class(c);
  mpz_fdiv_q(f.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  mpq_class inner = simplest_between(1 / (hi - f), 1 / (lo - f));
  return mpq_class(f) + 1 / inner;
}

inline int sign_variations(const std::vector<Poly<Rationals>>& chain, const mpq_class& x) {
  const Rationals q;
  int last = 0, changes = 0;
  for (const auto& p : chain) {
    const int s = sgn(eval(q, p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

template <class Ring>
Poly<Ring> powmod(const Ring& ring, Poly<Ring> base, mpz_class e, const Poly<Ring>& modulus) {
  Poly<Ring> acc{ring.one()};
  base = rem(ring, std::move(base), modulus);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = rem(ring, mul(ring, acc, base), modulus);
    base = rem(ring, mul(ring, base, base), modulus);
    e >>= 1;
  }
  return acc;
}

template <class Ring>
void split_linear(const Ring& ring, const Poly<Ring>& g, std::mt19937_64& rng,
                  std::vector<typename Ring::value_type>& out) {
  // g is monic, squarefree and a product of distinct linear factors; p is odd.
  if (degree<Ring>(g) <= 0) return;
  if (degree<Ring>(g) == 1) {
    out.push_back(ring.neg(g[0]));
    return;
  }
  const mpz_class half = (mpz_class(static_cast<unsigned long>(ring.modulus())) - 1) / 2;
  while (true) {
    Poly<Ring> shifted{ring.sample(rng), ring.one()};
    auto h = sub(ring, powmod(ring, shifted, half, g), Poly<Ring>{ring.one()});
    auto d = gcd(ring, g, h);
    if (degree<Ring>(d) > 0 && degree<Ring>(d) < degree<Ring>(g)) {
      split_linear(ring, d, rng, out);
      // exact division g / d
      Poly<Ring> q;
      {
        Poly<Ring> a = g;
        q.assign(g.size() - d.size() + 1, ring.zero());
        while (a.size() >= d.size()) {
          const auto c = a.back();
          const std::size_t shift = a.size() - d.size();
          q[shift] = c;
          for (std::size_t i = 0; i < d.size(); ++i) a[shift + i] = ring.sub(a[shift + i], ring.mul(c, d[i]));
          a = trimmed(ring, std::move(a));
        }
      }
      split_linear(ring, trimmed(ring, std::move(q)), rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Not a field: primitive idempotents are refused before reaching this point.
inline std::vector<mpz_class> roots(const Integers&, const Poly<Integers>&) {
  throw CapabilityError("root finding over Z is not supported");
}

/// Distinct roots of a nonzero squarefree polynomial that lie in the field, ascending.
inline std::vector<mpq_class> roots(const Rationals& ring, const Poly<Rationals>& input) {
  auto f = monic(ring, trimmed(ring, input));
  if (f.size() <= 1) return {};
  std::vector<Poly<Rationals>> chain{f, derivative(ring, f)};
  while (chain.back().size() > 1) {
    auto r = rem(ring, chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    chain.push_back(scale(ring, mpq_class(-1), std::move(r)));
  }
  mpq_class bound = 1;
  mpz_class denominators = 1;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    bound = std::max(bound, mpq_class(mpq_class(abs(f[i])) + 1));
    mpz_lcm(denominators.get_mpz_t(), denominators.get_mpz_t(), f[i].get_den_mpz_t());
  }
  // Rational roots have denominator dividing `denominators`; two of them are at
  // least 1/denominators^2 apart, which is the isolation width we bisect to.
  const mpq_class width = mpq_class(1, 1) / mpq_class(denominators * denominators * 2);
  std::vector<mpq_class> out;
  struct Interval {
    mpq_class lo, hi;
    int vlo, vhi;
  };
  std::vector<Interval> work{{-bound, bound, detail::sign_variations(chain, -bound),
                              detail::sign_variations(chain, bound)}};
  while (!work.empty()) {
    auto [lo, hi, vlo, vhi] = work.back();
    work.pop_back();
    const int count = vlo - vhi;
    if (count <= 0) continue;
    if (count == 1 && hi - lo < width) {
      auto s = poly::detail::simplest_between(lo, hi);
      if (s > lo && s <= hi && sgn(eval(ring, f, s)) == 0) out.push_back(s);
      continue;
    }
    mpq_class mid = (lo + hi) / 2;
    const int vmid = detail::sign_variations(chain, mid);
    work.push_back({lo, mid, vlo, vmid});
    work.push_back({mid, hi, vmid, vhi});
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class ModRing>
  requires(!std::is_same_v<ModRing, Rationals> && !std::is_same_v<ModRing, Integers>)
std::vector<typename ModRing::value_type> roots(const ModRing& ring, const Poly<ModRing>& input) {
  require_field(ring, "polynomial root finding");
  auto f = monic(ring, trimmed(ring, input));
  std::vector<typename ModRing::value_type> out;
  if (f.size() <= 1) return out;
  const auto p = ring.modulus();
  if (p <= 65536) {
    for (std::uint64_t x = 0; x < p; ++x) {
      if (ring.is_zero(eval(ring, f, x))) out.push_back(x);
    }
    return out;
  }
  // gcd(f, x^p - x) collects the linear factors
  auto xp = detail::powmod(ring, Poly<ModRing>{ring.zero(), ring.one()}, mpz_class(static_cast<unsigned long>(p)), f);
  auto g = gcd(ring, f, sub(ring, xp, Poly<ModRing>{ring.zero(), ring.one()}));
  std::mt19937_64 rng(p);
  detail::split_linear(ring, g, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace poly
}  // namespace flagalg
