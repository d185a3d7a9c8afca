#pragma once

// Exact commutative coefficient rings.
//
// Every ring is a small value object that performs arithmetic on its
// `value_type`. Values are kept normalized (reduced fractions, residues in
// [0, m)), so `==` on values is ring equality.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "flagalg/errors.hpp"

namespace flagalg {

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  std::uint64_t p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) return true;  // n itself is prime
  while (n % p == 0) n /= p;
  return n == 1;
}

// Accepts ASCII '-' and U+2212 as the minus sign.
inline std::string normalize_minus(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline mpz_class parse_integer(std::string_view text) {
  std::string s = normalize_minus(trim(text));
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw ParseError("not an integer: '" + s + "'");
  return z;
}

inline std::uint64_t parse_modulus(std::string_view text) {
  std::string s(trim(text));
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19) {
    throw ParseError("invalid modulus '" + s + "'");
  }
  return std::stoull(s);
}

}  // namespace detail

/// The field of rational numbers, backed by GMP.
class Rationals {
 public:
  using value_type = mpq_class;
  static constexpr bool is_integer_ring = false;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(mpz_class(static_cast<long>(v))); }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }

  std::optional<value_type> inverse(const value_type& a) const {
    if (is_zero(a)) return std::nullopt;
    return value_type(1 / a);
  }

  bool is_field() const { return true; }
  bool is_indecomposable() const { return true; }

  value_type sample(std::mt19937_64& rng) const {
    return from_int(std::uniform_int_distribution<int>(-5, 5)(rng));
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const {
    std::string s = detail::normalize_minus(detail::trim(text));
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0) {
      throw ParseError("not a rational number: '" + s + "'");
    }
    q.canonicalize();
    return q;
  }

  std::string name() const { return "Q"; }
  bool operator==(const Rationals&) const = default;
};

/// The ring of integers. Not a field: submodules are lattices.
class Integers {
 public:
  using value_type = mpz_class;
  static constexpr bool is_integer_ring = true;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpz_class(static_cast<long>(v)); }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }

  std::optional<value_type> inverse(const value_type& a) const {
    if (a == 1 || a == -1) return a;
    return std::nullopt;
  }

  bool is_field() const { return false; }
  bool is_indecomposable() const { return true; }

  value_type sample(std::mt19937_64& rng) const {
    return from_int(std::uniform_int_distribution<int>(-5, 5)(rng));
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const { return detail::parse_integer(text); }

  std::string name() const { return "Z"; }
  bool operator==(const Integers&) const = default;
};

namespace detail {

// Residue arithmetic shared by F_p and Z/m. Moduli up to 2^62.
class ModularArithmetic {
 public:
  using value_type = std::uint64_t;
  static constexpr bool is_integer_ring = false;

  explicit ModularArithmetic(std::uint64_t modulus) : m_(modulus) {
    if (modulus < 2 || modulus > (std::uint64_t{1} << 62)) {
      throw DomainError("modulus must lie in [2, 2^62]");
    }
  }

  std::uint64_t modulus() const { return m_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % m_; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(m_);
    return static_cast<value_type>(r < 0 ? r + static_cast<long long>(m_) : r);
  }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + m_ - b; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % m_);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : m_ - a; }
  bool is_zero(value_type a) const { return a == 0; }

  std::optional<value_type> inverse(value_type a) const {
    // extended Euclid on signed 128-bit values
    __int128 t = 0, new_t = 1, r = m_, new_r = a;
    while (new_r != 0) {
      __int128 q = r / new_r;
      __int128 tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (r != 1) return std::nullopt;
    if (t < 0) t += m_;
    return static_cast<value_type>(t);
  }

  value_type sample(std::mt19937_64& rng) const {
    return std::uniform_int_distribution<std::uint64_t>(0, m_ - 1)(rng);
  }

  std::string to_string(value_type a) const {
    return std::to_string(a) + " mod " + std::to_string(m_);
  }

  value_type parse(std::string_view text) const {
    std::string_view s = trim(text);
    if (auto pos = s.find("mod"); pos != std::string_view::npos) {
      if (parse_modulus(s.substr(pos + 3)) != m_) {
        throw ParseError("scalar '" + std::string(s) + "' has the wrong modulus");
      }
      s = trim(s.substr(0, pos));
    }
    mpz_class z = parse_integer(s);
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), m_);
    return r.get_ui();
  }

 private:
  std::uint64_t m_;
};

}  // namespace detail

/// The prime field F_p.
class PrimeField : public detail::ModularArithmetic {
 public:
  explicit PrimeField(std::uint64_t p) : ModularArithmetic(p) {
    if (!detail::is_prime(p)) throw DomainError("F_p requires a prime p, got " + std::to_string(p));
  }
  bool is_field() const { return true; }
  bool is_indecomposable() const { return true; }
  std::string name() const { return "Fp:" + std::to_string(modulus()); }
  bool operator==(const PrimeField& o) const { return modulus() == o.modulus(); }
};

/// Z/m for arbitrary m >= 2. Supports linear algebra only when m is prime.
class IntegersMod : public detail::ModularArithmetic {
 public:
  explicit IntegersMod(std::uint64_t m) : ModularArithmetic(m) {}
  bool is_field() const { return detail::is_prime(modulus()); }
  bool is_indecomposable() const { return detail::is_prime_power(modulus()); }
  std::string name() const { return "Zm:" + std::to_string(modulus()); }
  bool operator==(const IntegersMod& o) const { return modulus() == o.modulus(); }
};

template <class R>
concept CoefficientRing = requires(const R r, const typename R::value_type a, std::mt19937_64 g) {
  { r.zero() } -> std::convertible_to<typename R::value_type>;
  { r.add(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.mul(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { r.is_field() } -> std::convertible_to<bool>;
  { r.to_string(a) } -> std::convertible_to<std::string>;
  { r.name() } -> std::convertible_to<std::string>;
  { r.sample(g) } -> std::convertible_to<typename R::value_type>;
};

/// A ring chosen at runtime, e.g. from the `--ring` flag.
using AnyRing = std::variant<Rationals, PrimeField, Integers, IntegersMod>;

/// Parses `Q`, `Fp:<p>`, `Z` or `Zm:<m>`.
inline AnyRing parse_ring(std::string_view spec) {
  spec = detail::trim(spec);
  if (spec == "Q") return Rationals{};
  if (spec == "Z") return Integers{};
  try {
    if (spec.starts_with("Fp:")) return PrimeField(detail::parse_modulus(spec.substr(3)));
    if (spec.starts_with("Zm:")) return IntegersMod(detail::parse_modulus(spec.substr(3)));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid ring '") + std::string(spec) + "': " + e.what());
  }
  throw ParseError("unknown ring '" + std::string(spec) + "' (expected Q, Fp:<p>, Z or Zm:<m>)");
}

inline std::string ring_name(const AnyRing& ring) {
  return std::visit([](const auto& r) { return r.name(); }, ring);
}

}  // namespace flagalg
