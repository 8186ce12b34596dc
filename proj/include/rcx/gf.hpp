#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "rcx/common.hpp"

namespace rcx::gf {

// Elements of F_{p^k} are stored as codes in [0, p^k): the base-p digits of
// a code are the coefficients of the element in the power basis of the
// modulus root.  Code arithmetic goes through exp/log tables built once per
// field, so fields are capped at a few million elements.

using code = std::uint32_t;

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

namespace detail {

// Bootstrap polynomial arithmetic on raw digit vectors mod p (low degree
// first, no trimming guarantees).  Used only while constructing a field.
inline std::vector<int> poly_mulmod(const std::vector<int>& a,
                                    const std::vector<int>& b,
                                    const std::vector<int>& mod, int p) {
  std::vector<int> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (size_t j = 0; j < b.size(); ++j)
        r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  int k = (int)mod.size() - 1;
  for (int i = (int)r.size() - 1; i >= k; --i) {
    if (r[i] == 0) continue;
    int c = r[i];
    for (int j = 0; j <= k; ++j) {
      int idx = i - k + j;
      r[idx] = ((r[idx] - c * mod[j]) % p + p) % p;
    }
  }
  r.resize(k);
  return r;
}

inline std::vector<int> poly_divrem(std::vector<int> a, const std::vector<int>& b, int p) {
  // remainder of a by b; b monic-izable (leading coefficient invertible mod p)
  int db = (int)b.size() - 1;
  while (db >= 0 && b[db] == 0) --db;
  int inv_lead = 1;
  for (int t = 1; t < p; ++t)
    if (b[db] * t % p == 1) { inv_lead = t; break; }
  int da = (int)a.size() - 1;
  while (da >= 0 && a[da] == 0) --da;
  while (da >= db && db >= 0) {
    int c = a[da] * inv_lead % p;
    for (int j = 0; j <= db; ++j)
      a[da - db + j] = ((a[da - db + j] - c * b[j]) % p + p) % p;
    while (da >= 0 && a[da] == 0) --da;
  }
  a.resize(db > 0 ? db : 1);
  return a;
}

inline bool poly_is_zero(const std::vector<int>& a) {
  for (int c : a) if (c) return false;
  return true;
}

// Irreducibility over F_p by exhaustive trial division up to degree k/2.
inline bool is_irreducible(const std::vector<int>& f, int p) {
  int k = (int)f.size() - 1;
  if (k == 1) return true;
  for (int dd = 1; 2 * dd <= k; ++dd) {
    long long count = 1;
    for (int t = 0; t < dd; ++t) count *= p;
    for (long long m = 0; m < count; ++m) {
      std::vector<int> div(dd + 1, 0);
      long long mm = m;
      for (int t = 0; t < dd; ++t) { div[t] = int(mm % p); mm /= p; }
      div[dd] = 1;
      if (poly_is_zero(poly_divrem(f, div, p))) return false;
    }
  }
  return true;
}

}  // namespace detail

class FieldSpec {
 public:
  int p;                       // odd prime characteristic
  int k;                       // extension degree over F_p
  code size;                   // p^k
  std::vector<code> modulus;   // monic irreducible, length k+1, low first
  code generator;              // smallest multiplicative generator

  static constexpr code kMaxSize = 1u << 22;

  FieldSpec(int p_, int k_) : p(p_), k(k_) {
    if (!is_prime(p) || p == 2)
      throw parameter_error("FieldSpec: p must be an odd prime");
    if (k < 1) throw parameter_error("FieldSpec: k must be >= 1");
    long long n = 1;
    for (int i = 0; i < k; ++i) {
      n *= p;
      if (n > kMaxSize) throw parameter_error("FieldSpec: field too large");
    }
    size = (code)n;
    find_modulus();
    build_tables();
  }

  FieldSpec(const FieldSpec&) = delete;
  FieldSpec& operator=(const FieldSpec&) = delete;

  code zero() const { return 0; }
  code one() const { return 1; }

  code add(code a, code b) const {
    code r = 0, mul = 1;
    for (int i = 0; i < k; ++i) {
      int da = int(a % p), db = int(b % p);
      a /= p; b /= p;
      r += code((da + db) % p) * mul;
      mul *= p;
    }
    return r;
  }

  code neg(code a) const {
    code r = 0, mul = 1;
    for (int i = 0; i < k; ++i) {
      int da = int(a % p);
      a /= p;
      r += code(da ? p - da : 0) * mul;
      mul *= p;
    }
    return r;
  }

  code sub(code a, code b) const { return add(a, neg(b)); }

  code mul(code a, code b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  code inv(code a) const {
    if (a == 0) throw math_error("FieldSpec::inv of zero");
    return exp_[size - 1 - log_[a]];
  }

  code div(code a, code b) const { return mul(a, inv(b)); }

  code pow(code a, long long e) const {
    if (a == 0) {
      if (e <= 0) throw math_error("FieldSpec::pow: 0 to nonpositive power");
      return 0;
    }
    long long m = size - 1;
    long long ee = ((e % m) + m) % m;
    return exp_[(std::uint64_t)log_[a] * ee % m];
  }

  // Absolute Frobenius x -> x^p.  Applying it k times is the identity.
  code frobenius(code a) const { return pow(a, p); }

  // x -> x^{p^m}, the Frobenius relative to the subfield F_{p^m}.
  code frobenius_power(code a, int m) const {
    code r = a;
    for (int i = 0; i < m; ++i) r = frobenius(r);
    return r;
  }

  // Multiplicative order; divides p^k - 1.
  long long element_order(code a) const {
    if (a == 0) throw math_error("element_order of zero");
    long long n = size - 1, ord = n;
    long long m = n;
    for (long long f = 2; f * f <= m; ++f)
      while (m % f == 0) {
        m /= f;
        while (ord % f == 0 && pow(a, ord / f) == 1) ord /= f;
      }
    if (m > 1)
      while (ord % m == 0 && pow(a, ord / m) == 1) ord /= m;
    return ord;
  }

  bool is_square(code a) const {
    if (a == 0) return true;
    return pow(a, (size - 1) / 2) == 1;
  }

  // x is a d-th power iff x^{(size-1)/gcd(d, size-1)} = 1.
  bool is_dth_power(code a, long long d) const {
    if (a == 0) return true;
    long long g = std::gcd(d, (long long)size - 1);
    return pow(a, (size - 1) / g) == 1;
  }

  std::vector<int> digits(code a) const {
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) { d[i] = int(a % p); a /= p; }
    return d;
  }

  code from_digits(const std::vector<int>& d) const {
    code r = 0, mul = 1;
    for (int i = 0; i < k; ++i) {
      r += code(((d[i] % p) + p) % p) * mul;
      mul *= p;
    }
    return r;
  }

  code from_int(long long v) const { return code(((v % p) + p) % p); }

 private:
  std::vector<code> exp_;  // exp_[t] = generator^t, t in [0, 2(size-1))
  std::vector<code> log_;  // log_[x] for x != 0

  void find_modulus() {
    if (k == 1) {
      modulus = {0, 1};  // the polynomial y
      return;
    }
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long m = 0; m < count; ++m) {
      std::vector<int> f(k + 1, 0);
      long long mm = m;
      for (int i = 0; i < k; ++i) { f[i] = int(mm % p); mm /= p; }
      f[k] = 1;
      if (detail::is_irreducible(f, p)) {
        modulus.assign(f.begin(), f.end());
        return;
      }
    }
    throw consistency_error("FieldSpec: no irreducible modulus found");
  }

  code mul_slow(code a, code b) const {
    std::vector<int> va = digits(a), vb = digits(b);
    std::vector<int> m(modulus.begin(), modulus.end());
    return from_digits(detail::poly_mulmod(va, vb, m, p));
  }

  code pow_slow(code a, long long e) const {
    code r = 1, base = a;
    while (e) {
      if (e & 1) r = mul_slow(r, base);
      base = mul_slow(base, base);
      e >>= 1;
    }
    return r;
  }

  void build_tables() {
    long long n = size - 1;
    std::vector<long long> prime_factors;
    long long m = n;
    for (long long f = 2; f * f <= m; ++f)
      if (m % f == 0) {
        prime_factors.push_back(f);
        while (m % f == 0) m /= f;
      }
    if (m > 1) prime_factors.push_back(m);

    generator = 0;
    for (code g = 1; g < size; ++g) {
      bool ok = true;
      for (long long f : prime_factors)
        if (pow_slow(g, n / f) == 1) { ok = false; break; }
      if (ok) { generator = g; break; }
    }
    if (generator == 0) throw consistency_error("FieldSpec: no generator");

    exp_.resize(2 * n);
    log_.assign(size, 0);
    code cur = 1;
    for (long long t = 0; t < n; ++t) {
      exp_[t] = cur;
      exp_[t + n] = cur;
      log_[cur] = (code)t;
      cur = mul_slow(cur, generator);
    }
    if (cur != 1) throw consistency_error("FieldSpec: generator order wrong");
  }
};

// Deterministic registry so field references stay valid for the process
// lifetime and repeated requests return the same object.
inline const FieldSpec& build_field(int p, int k) {
  static std::map<std::pair<int, int>, std::unique_ptr<FieldSpec>> registry;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::make_unique<FieldSpec>(p, k)).first;
  return *it->second;
}

// Embedding of F_{p^m} into F_{p^k} (m | k), sending the power-basis root of
// the small modulus to its smallest root in the big field.
class Embedding {
 public:
  const FieldSpec* sub;
  const FieldSpec* big;
  code root;

  Embedding(const FieldSpec& s, const FieldSpec& b) : sub(&s), big(&b) {
    if (s.p != b.p || b.k % s.k != 0)
      throw parameter_error("Embedding: not a subfield");
    root = 0;
    bool found = false;
    for (code x = 0; x < b.size && !found; ++x) {
      code v = 0;
      for (int i = (int)s.modulus.size() - 1; i >= 0; --i)
        v = b.add(b.mul(v, x), b.from_int(s.modulus[i]));
      if (v == 0) { root = x; found = true; }
    }
    if (!found) throw consistency_error("Embedding: modulus has no root");
    root_pow_.resize(s.k);
    code cur = 1;
    for (int i = 0; i < s.k; ++i) { root_pow_[i] = cur; cur = b.mul(cur, root); }
    for (code a = 0; a < s.size; ++a) img2sub_[map(a)] = a;
  }

  code map(code a) const {
    code r = 0;
    auto d = sub->digits(a);
    for (int i = 0; i < sub->k; ++i)
      if (d[i]) r = big->add(r, big->mul(big->from_int(d[i]), root_pow_[i]));
    return r;
  }

  bool in_image(code b) const { return img2sub_.count(b) != 0; }

  code preimage(code b) const {
    auto it = img2sub_.find(b);
    if (it == img2sub_.end())
      throw math_error("Embedding::preimage: element not in subfield");
    return it->second;
  }

 private:
  std::vector<code> root_pow_;
  std::unordered_map<code, code> img2sub_;
};

// Writes big-field elements as coordinate vectors over a subfield basis.
// Solves the F_p-linear system x = sum_i eps(c_i) * basis_i once via an
// inverse matrix, then answers queries in O(k^2).
class SubfieldCoords {
 public:
  SubfieldCoords(const Embedding& eps, const std::vector<code>& basis)
      : eps_(&eps), basis_(basis) {
    const FieldSpec& B = *eps.big;
    const FieldSpec& S = *eps.sub;
    int k = B.k, m = S.k;
    int d = (int)basis.size();
    if (d * m != k) throw parameter_error("SubfieldCoords: basis size mismatch");
    // column (i*m + t): digits of eps(theta_sub^t) * basis_i
    std::vector<std::vector<int>> M(k, std::vector<int>(k));
    for (int i = 0; i < d; ++i)
      for (int t = 0; t < m; ++t) {
        code thpow = 1;
        for (int s = 0; s < t; ++s) thpow = code(thpow * S.p);  // code of theta^t
        code col = B.mul(eps.map(thpow), basis[i]);
        auto dg = B.digits(col);
        for (int r = 0; r < k; ++r) M[r][i * m + t] = dg[r];
      }
    inv_ = invert_mod_p(M, B.p);  // throws if basis is not a basis
  }

  // Coordinates of x over the basis, as subfield codes.
  std::vector<code> coords(code x) const {
    const FieldSpec& B = *eps_->big;
    const FieldSpec& S = *eps_->sub;
    int k = B.k, m = S.k, d = (int)basis_.size();
    auto dg = B.digits(x);
    std::vector<int> sol(k, 0);
    for (int r = 0; r < k; ++r) {
      long long acc = 0;
      for (int c = 0; c < k; ++c) acc += (long long)inv_[r][c] * dg[c];
      sol[r] = int(acc % B.p);
    }
    std::vector<code> out(d);
    for (int i = 0; i < d; ++i) {
      std::vector<int> sd(m);
      for (int t = 0; t < m; ++t) sd[t] = sol[i * m + t];
      out[i] = S.from_digits(sd);
    }
    return out;
  }

 private:
  const Embedding* eps_;
  std::vector<code> basis_;
  std::vector<std::vector<int>> inv_;

  static std::vector<std::vector<int>> invert_mod_p(std::vector<std::vector<int>> M, int p) {
    int n = (int)M.size();
    std::vector<std::vector<int>> I(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (M[r][col] % p != 0) { piv = r; break; }
      if (piv < 0) throw math_error("SubfieldCoords: singular basis matrix");
      std::swap(M[piv], M[col]);
      std::swap(I[piv], I[col]);
      int il = 1;
      for (int t = 1; t < p; ++t)
        if (M[col][col] * t % p == 1) { il = t; break; }
      for (int c = 0; c < n; ++c) {
        M[col][c] = M[col][c] * il % p;
        I[col][c] = I[col][c] * il % p;
      }
      for (int r = 0; r < n; ++r) {
        if (r == col || M[r][col] == 0) continue;
        int f = M[r][col];
        for (int c = 0; c < n; ++c) {
          M[r][c] = ((M[r][c] - f * M[col][c]) % p + p) % p;
          I[r][c] = ((I[r][c] - f * I[col][c]) % p + p) % p;
        }
      }
    }
    return I;
  }
};

// Smallest xi (by code) whose Galois orbit over the subfield is a basis.
// For the prime field (m == k) any nonzero element qualifies; returns 1.
inline code find_normal_element(const FieldSpec& big, const Embedding& eps) {
  const FieldSpec& S = *eps.sub;
  int d = big.k / S.k;
  if (d == 1) return 1;
  long long q = S.size;
  for (code x = 1; x < big.size; ++x) {
    std::vector<code> orbit(d);
    orbit[0] = x;
    for (int i = 1; i < d; ++i) orbit[i] = big.pow(orbit[i - 1], q);
    try {
      SubfieldCoords sc(eps, orbit);
      (void)sc;
      return x;
    } catch (const math_error&) {
      continue;
    }
  }
  throw consistency_error("find_normal_element: none found");
}

}  // namespace rcx::gf
