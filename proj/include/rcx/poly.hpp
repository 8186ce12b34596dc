#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "rcx/gf.hpp"

namespace rcx::gf {

// Dense univariate polynomial over a FieldSpec, low degree first.
// Normalized: no trailing zero coefficients; the zero polynomial is {}.
class Poly {
 public:
  const FieldSpec* field = nullptr;
  std::vector<code> c;

  Poly() = default;
  explicit Poly(const FieldSpec& f) : field(&f) {}
  Poly(const FieldSpec& f, std::vector<code> coeffs) : field(&f), c(std::move(coeffs)) {
    trim();
  }

  static Poly constant(const FieldSpec& f, code v) {
    Poly p(f);
    if (v) p.c = {v};
    return p;
  }
  static Poly variable(const FieldSpec& f) { return Poly(f, {0, 1}); }

  bool is_zero() const { return c.empty(); }
  int degree() const { return (int)c.size() - 1; }  // -1 for zero
  code lead() const { return c.empty() ? 0 : c.back(); }
  code coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : 0; }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  Poly operator+(const Poly& o) const {
    Poly r(*field);
    r.c.resize(std::max(c.size(), o.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i)
      r.c[i] = field->add(coeff((int)i), o.coeff((int)i));
    r.trim();
    return r;
  }

  Poly operator-(const Poly& o) const {
    Poly r(*field);
    r.c.resize(std::max(c.size(), o.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i)
      r.c[i] = field->sub(coeff((int)i), o.coeff((int)i));
    r.trim();
    return r;
  }

  Poly operator*(const Poly& o) const {
    Poly r(*field);
    if (is_zero() || o.is_zero()) return r;
    r.c.assign(c.size() + o.c.size() - 1, 0);
    for (size_t i = 0; i < c.size(); ++i) {
      if (!c[i]) continue;
      for (size_t j = 0; j < o.c.size(); ++j)
        if (o.c[j]) r.c[i + j] = field->add(r.c[i + j], field->mul(c[i], o.c[j]));
    }
    r.trim();
    return r;
  }

  Poly scaled(code s) const {
    Poly r(*field);
    if (!s) return r;
    r.c.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) r.c[i] = field->mul(c[i], s);
    return r;
  }

  // quotient and remainder; divisor must be nonzero
  std::pair<Poly, Poly> divmod(const Poly& b) const {
    if (b.is_zero()) throw math_error("Poly: division by zero");
    Poly q(*field), r = *this;
    if (r.degree() < b.degree()) return {q, r};
    q.c.assign(r.degree() - b.degree() + 1, 0);
    code il = field->inv(b.lead());
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int shift = r.degree() - b.degree();
      code f = field->mul(r.lead(), il);
      q.c[shift] = f;
      for (int i = 0; i <= b.degree(); ++i)
        r.c[i + shift] = field->sub(r.c[i + shift], field->mul(f, b.c[i]));
      r.trim();
    }
    q.trim();
    return {q, r};
  }

  Poly operator/(const Poly& b) const { return divmod(b).first; }
  Poly operator%(const Poly& b) const { return divmod(b).second; }

  bool operator==(const Poly& o) const { return c == o.c; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field->inv(lead()));
  }

  code eval(code x) const {
    code v = 0;
    for (int i = degree(); i >= 0; --i) v = field->add(field->mul(v, x), c[i]);
    return v;
  }

  // Evaluate with coefficients pushed through an embedding into a bigger field.
  code eval_embedded(const Embedding& eps, code x) const {
    const FieldSpec& B = *eps.big;
    code v = 0;
    for (int i = degree(); i >= 0; --i) v = B.add(B.mul(v, x), eps.map(c[i]));
    return v;
  }

  // Multiplicity of the root y = 0, i.e. the index of the lowest nonzero
  // coefficient.  kInfValuation for the zero polynomial.
  long long order_at_zero() const {
    if (is_zero()) return kInfValuation;
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i]) return (long long)i;
    return kInfValuation;
  }

  // Comma-separated coefficient list, low degree first: y^2+1 -> "1,0,1".
  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) os << ',';
      os << c[i];
    }
    return os.str();
  }

  static Poly parse(const FieldSpec& f, const std::string& s) {
    Poly p(f);
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      long long v = std::stoll(tok);
      if (v < 0 || v >= (long long)f.size)
        throw parameter_error("Poly::parse: coefficient out of range");
      p.c.push_back((code)v);
    }
    p.trim();
    return p;
  }
};

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Exhaustive divisor scan; adequate for desk-sized degrees.
inline bool is_irreducible(const Poly& f) {
  int k = f.degree();
  if (k <= 0) return false;
  if (k == 1) return true;
  const FieldSpec& F = *f.field;
  for (int dd = 1; 2 * dd <= k; ++dd) {
    long long count = 1;
    for (int t = 0; t < dd; ++t) count *= F.size;
    for (long long m = 0; m < count; ++m) {
      Poly div(F);
      div.c.assign(dd + 1, 0);
      long long mm = m;
      for (int t = 0; t < dd; ++t) { div.c[t] = code(mm % F.size); mm /= F.size; }
      div.c[dd] = 1;
      if ((f % div).is_zero()) return false;
    }
  }
  return true;
}

// Monic minimal polynomial over the embedding's subfield of an element of
// the big field: the product of (T - conjugate) over the Galois orbit.
// Its degree divides [big : sub] and equals it iff x generates.
inline Poly minimal_polynomial(code x, const Embedding& eps) {
  const FieldSpec& B = *eps.big;
  const FieldSpec& S = *eps.sub;
  long long q = S.size;
  std::vector<code> orbit;
  code cur = x;
  do {
    orbit.push_back(cur);
    cur = B.pow(cur, q);
  } while (cur != x && (int)orbit.size() <= B.k);
  if (cur != x) throw consistency_error("minimal_polynomial: orbit did not close");

  // expand prod (T - o) with coefficients in the big field
  std::vector<code> cf = {1};
  for (code o : orbit) {
    std::vector<code> nf(cf.size() + 1, 0);
    for (size_t i = 0; i < cf.size(); ++i) {
      nf[i + 1] = B.add(nf[i + 1], cf[i]);
      nf[i] = B.sub(nf[i], B.mul(cf[i], o));
    }
    cf = std::move(nf);
  }
  Poly out(S);
  out.c.resize(cf.size());
  for (size_t i = 0; i < cf.size(); ++i) out.c[i] = eps.preimage(cf[i]);
  out.trim();
  return out;
}

}  // namespace rcx::gf
