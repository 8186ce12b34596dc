#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcx {

// Thrown when an argument violates an operation's stated precondition.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a value is outside the mathematical domain of an operation
// (zero element, singular matrix, vanishing denominator, ...).
struct math_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when an explicit budget (elements, memory, iterations) is exceeded.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an internal cross-check fails; indicates a bug, never user error.
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline constexpr long long kInfValuation = 0x3fffffffffffffffLL;

// splitmix64: the sampling generator used everywhere a seed appears in a
// report.  Fixed recurrence, so streams are reproducible across platforms.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t lim = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do { v = next(); } while (v >= lim);
    return v % n;
  }
  bool coin() { return next() & 1ULL; }
};

// Exact rational with 128-bit intermediates.  Large enough for every count
// ratio appearing in discrepancy work at desk scale.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n) : num(n), den(1) {}
  Fraction(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw math_error("Fraction: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  static Fraction from128(__int128 n, __int128 d) {
    if (d == 0) throw math_error("Fraction: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw math_error("Fraction: overflow after reduction");
    Fraction f;
    f.num = (long long)n;
    f.den = (long long)d;
    return f;
  }

  Fraction operator+(const Fraction& o) const {
    return from128((__int128)num * o.den + (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Fraction operator-(const Fraction& o) const {
    return from128((__int128)num * o.den - (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Fraction operator*(const Fraction& o) const {
    return from128((__int128)num * o.num, (__int128)den * o.den);
  }
  Fraction operator/(const Fraction& o) const {
    if (o.num == 0) throw math_error("Fraction: division by zero");
    return from128((__int128)num * o.den, (__int128)den * o.num);
  }
  Fraction abs() const { return num < 0 ? Fraction(-num, den) : *this; }
  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Fraction& o) const { return !(*this == o); }
  bool operator<(const Fraction& o) const {
    return (__int128)num * o.den < (__int128)o.num * den;
  }
  bool operator<=(const Fraction& o) const {
    return (__int128)num * o.den <= (__int128)o.num * den;
  }
  double value() const { return double(num) / double(den); }
  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// Number of i-dimensional subspaces of F_q^d.
inline long long gaussian_binomial(int d, int i, long long q) {
  if (i < 0 || i > d) return 0;
  // [d i]_q = prod_{t=0}^{i-1} (q^{d-t}-1)/(q^{t+1}-1), computed exactly
  // by alternating multiply/divide to keep intermediates integral.
  __int128 r = 1;
  for (int t = 0; t < i; ++t) {
    __int128 num = 1, den = 1;
    for (int s = 0; s < d - t; ++s) num *= q;
    for (int s = 0; s < t + 1; ++s) den *= q;
    r = r * (num - 1) / (den - 1);
  }
  if (r > INT64_MAX) throw math_error("gaussian_binomial: overflow");
  return (long long)r;
}

// |PSL_d(F_s)| = s^{d(d-1)/2} * prod_{i=2}^{d} (s^i - 1) / gcd(d, s-1).
inline unsigned long long psl_order(int d, long long s) {
  __int128 r = 1;
  for (int i = 0; i < d * (d - 1) / 2; ++i) r *= s;
  for (int i = 2; i <= d; ++i) {
    __int128 p = 1;
    for (int t = 0; t < i; ++t) p *= s;
    r *= (p - 1);
  }
  r /= std::gcd((long long)d, s - 1);
  if (r > (__int128)UINT64_MAX) throw math_error("psl_order: overflow");
  return (unsigned long long)r;
}

}  // namespace rcx
