#pragma once

#include "rcx/poly.hpp"

namespace rcx::laurent {

using gf::code;
using gf::Embedding;
using gf::FieldSpec;
using gf::Poly;

// Reduced rational function num/den over F_q: gcd(num, den) = 1, den monic,
// zero stored as 0/1.
class RatFun {
 public:
  Poly num, den;

  RatFun() = default;
  explicit RatFun(const FieldSpec& f) : num(f), den(Poly::constant(f, 1)) {}
  RatFun(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) { reduce(); }

  static RatFun constant(const FieldSpec& f, code v) {
    return RatFun(Poly::constant(f, v), Poly::constant(f, 1));
  }
  static RatFun of(Poly p) {
    const FieldSpec& f = *p.field;
    return RatFun(std::move(p), Poly::constant(f, 1));
  }
  static RatFun variable(const FieldSpec& f) { return of(Poly::variable(f)); }

  const FieldSpec& field() const { return *den.field; }
  bool is_zero() const { return num.is_zero(); }
  bool is_one() const { return num.degree() == 0 && num.c[0] == 1 && den.degree() == 0; }

  void reduce() {
    if (den.is_zero()) throw math_error("RatFun: zero denominator");
    if (num.is_zero()) {
      den = Poly::constant(*den.field, 1);
      return;
    }
    Poly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = num / g;
      den = den / g;
    }
    code il = den.field->inv(den.lead());
    if (il != 1) {
      num = num.scaled(il);
      den = den.scaled(il);
    }
  }

  RatFun operator+(const RatFun& o) const {
    return RatFun(num * o.den + o.num * den, den * o.den);
  }
  RatFun operator-(const RatFun& o) const {
    return RatFun(num * o.den - o.num * den, den * o.den);
  }
  RatFun operator*(const RatFun& o) const { return RatFun(num * o.num, den * o.den); }
  RatFun operator/(const RatFun& o) const {
    if (o.is_zero()) throw math_error("RatFun: division by zero");
    return RatFun(num * o.den, den * o.num);
  }
  RatFun neg() const {
    RatFun r = *this;
    r.num = Poly(*num.field) - r.num;
    return r;
  }
  RatFun inv() const {
    if (is_zero()) throw math_error("RatFun: inverse of zero");
    return RatFun(den, num);
  }

  bool operator==(const RatFun& o) const { return num == o.num && den == o.den; }
  bool operator!=(const RatFun& o) const { return !(*this == o); }

  // y-adic valuation; kInfValuation for zero.
  long long valuation() const {
    if (is_zero()) return kInfValuation;
    return num.order_at_zero() - den.order_at_zero();
  }

  // Evaluate at y = alpha in a bigger field; throws if denominator vanishes.
  code eval(const Embedding& eps, code alpha) const {
    code dv = den.eval_embedded(eps, alpha);
    if (dv == 0) throw math_error("RatFun::eval: denominator vanishes");
    return eps.big->div(num.eval_embedded(eps, alpha), dv);
  }

  std::string str() const { return num.str() + "/" + den.str(); }

  static RatFun parse(const FieldSpec& f, const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return of(Poly::parse(f, s));
    return RatFun(Poly::parse(f, s.substr(0, slash)),
                  Poly::parse(f, s.substr(slash + 1)));
  }
};

}  // namespace rcx::laurent
