#include <catch2/catch_amalgamated.hpp>

#include "rcx/gf.hpp"
#include "rcx/poly.hpp"

using namespace rcx;
using namespace rcx::gf;

namespace {

// Independent irreducibility oracle: f (monic, degree k, coeff digits of m)
// is irreducible iff it has no monic divisor of degree 1..k-1.  Written
// against raw digit vectors so it shares nothing with FieldSpec internals.
bool oracle_irreducible(const std::vector<int>& f, int p) {
  int k = (int)f.size() - 1;
  for (int dd = 1; dd < k; ++dd) {
    long long count = 1;
    for (int t = 0; t < dd; ++t) count *= p;
    for (long long m = 0; m < count; ++m) {
      std::vector<int> g(dd + 1, 0);
      long long mm = m;
      for (int t = 0; t < dd; ++t) { g[t] = int(mm % p); mm /= p; }
      g[dd] = 1;
      // long division f by g over F_p
      std::vector<int> r = f;
      for (int i = k; i >= dd; --i) {
        int c = r[i] % p;
        if (!c) continue;
        for (int j = 0; j <= dd; ++j)
          r[i - dd + j] = ((r[i - dd + j] - c * g[j]) % p + p) % p;
      }
      bool zero = true;
      for (int x : r) if (x % p) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

std::vector<int> first_irreducible(int p, int k) {
  long long count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (long long m = 0; m < count; ++m) {
    std::vector<int> f(k + 1, 0);
    long long mm = m;
    for (int i = 0; i < k; ++i) { f[i] = int(mm % p); mm /= p; }
    f[k] = 1;
    if (oracle_irreducible(f, p)) return f;
  }
  return {};
}

}  // namespace

TEST_CASE("build_field chooses the smallest irreducible modulus") {
  const FieldSpec& f3 = build_field(3, 1);
  CHECK(f3.modulus == std::vector<code>{0, 1});  // the polynomial y

  const FieldSpec& f9 = build_field(3, 2);
  CHECK(f9.modulus == std::vector<code>{1, 0, 1});  // y^2 + 1
  auto expect = first_irreducible(3, 2);
  REQUIRE(expect.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK((int)f9.modulus[i] == expect[i]);

  const FieldSpec& f125 = build_field(5, 3);
  auto expect5 = first_irreducible(5, 3);
  REQUIRE((int)f125.modulus.size() == (int)expect5.size());
  for (size_t i = 0; i < expect5.size(); ++i) CHECK((int)f125.modulus[i] == expect5[i]);

  CHECK_THROWS_AS(build_field(2, 1), parameter_error);
  CHECK_THROWS_AS(build_field(9, 1), parameter_error);
  CHECK_THROWS_AS(build_field(3, 0), parameter_error);
}

TEST_CASE("field axioms hold on random samples") {
  const FieldSpec& F = build_field(3, 4);  // F_81
  SplitMix64 rng(12345);
  for (int t = 0; t < 1000; ++t) {
    code a = (code)rng.below(F.size);
    code b = (code)rng.below(F.size);
    code c = (code)rng.below(F.size);
    CHECK(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c));
    CHECK(F.add(a, F.add(b, c)) == F.add(F.add(a, b), c));
    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
    CHECK(F.pow(a, F.size) == a);  // x^{p^k} = x
    if (a != 0) CHECK((F.size - 1) % F.element_order(a) == 0);
  }
}

TEST_CASE("frobenius") {
  const FieldSpec& f3 = build_field(3, 1);
  for (code x = 0; x < 3; ++x) CHECK(f3.frobenius(x) == x);

  const FieldSpec& f9 = build_field(3, 2);
  code g = f9.generator;
  CHECK(f9.frobenius(g) == f9.pow(g, 3));
  CHECK(f9.frobenius(f9.frobenius(g)) == g);
  CHECK(f9.frobenius(0) == 0);
}

TEST_CASE("element_order") {
  const FieldSpec& f9 = build_field(3, 2);
  CHECK(f9.element_order(1) == 1);
  code minus1 = f9.neg(1);
  CHECK(f9.element_order(minus1) == 2);
  // exhaustive scan oracle for the generator
  code g = f9.generator;
  int ord = 0;
  code cur = 1;
  for (int n = 1; n <= 8; ++n) {
    cur = f9.mul(cur, g);
    if (cur == 1) { ord = n; break; }
  }
  CHECK(ord == 8);
  CHECK(f9.element_order(g) == 8);
  CHECK_THROWS_AS(f9.element_order(0), math_error);
}

TEST_CASE("minimal_polynomial") {
  const FieldSpec& f3 = build_field(3, 1);
  const FieldSpec& f9 = build_field(3, 2);
  Embedding eps(f3, f9);

  // x = 1 -> y - 1
  Poly m1 = minimal_polynomial(1, eps);
  CHECK(m1.degree() == 1);
  CHECK(m1.c == std::vector<code>{2, 1});  // y + 2 = y - 1 over F_3

  // any x in F_9 \ F_3: monic quadratic vanishing at x
  for (code x = 0; x < f9.size; ++x) {
    if (eps.in_image(x)) continue;
    Poly m = minimal_polynomial(x, eps);
    REQUIRE(m.degree() == 2);
    CHECK(m.lead() == 1);
    CHECK(m.eval_embedded(eps, x) == 0);
    CHECK(is_irreducible(m));
  }

  // generator of F_81 over F_3 has degree 4
  const FieldSpec& f81 = build_field(3, 4);
  Embedding eps81(f3, f81);
  Poly mg = minimal_polynomial(f81.generator, eps81);
  CHECK(mg.degree() == 4);
  CHECK(mg.eval_embedded(eps81, f81.generator) == 0);
  CHECK(is_irreducible(mg));
}

TEST_CASE("find_normal_element") {
  const FieldSpec& f3 = build_field(3, 1);

  // F_9 over F_3: xi with {xi, xi^3} independent, checked by 2x2 determinant
  const FieldSpec& f9 = build_field(3, 2);
  Embedding e9(f3, f9);
  code xi = find_normal_element(f9, e9);
  code xi3 = f9.pow(xi, 3);
  auto a = f9.digits(xi), b = f9.digits(xi3);
  int det = ((a[0] * b[1] - a[1] * b[0]) % 3 + 3) % 3;
  CHECK(det != 0);

  // F_27 over F_3: 3x3 rank
  const FieldSpec& f27 = build_field(3, 3);
  Embedding e27(f3, f27);
  code xi27 = find_normal_element(f27, e27);
  std::vector<code> orbit = {xi27, f27.pow(xi27, 3), f27.pow(xi27, 9)};
  SubfieldCoords sc(e27, orbit);  // construction = rank check
  auto coords = sc.coords(f27.pow(xi27, 3));
  CHECK(coords == std::vector<code>{0, 1, 0});

  // trivial extension: any nonzero element, deterministically 1
  Embedding e3(f3, f3);
  CHECK(find_normal_element(f3, e3) == 1);
}

TEST_CASE("embedding maps subfield faithfully") {
  const FieldSpec& f9 = build_field(3, 2);
  const FieldSpec& f81 = build_field(3, 4);
  Embedding eps(f9, f81);
  for (code a = 0; a < f9.size; ++a)
    for (code b = 0; b < f9.size; ++b) {
      CHECK(eps.map(f9.mul(a, b)) == f81.mul(eps.map(a), eps.map(b)));
      CHECK(eps.map(f9.add(a, b)) == f81.add(eps.map(a), eps.map(b)));
    }
  CHECK(eps.preimage(eps.map(5)) == 5);
}

TEST_CASE("poly arithmetic and serialization") {
  const FieldSpec& F = build_field(3, 1);
  Poly a = Poly::parse(F, "1,0,1");  // 1 + y^2
  Poly b = Poly::parse(F, "2,1");    // 2 + y
  CHECK((a * b).str() == "2,1,2,1");
  CHECK((a + b).str() == "0,1,1");
  auto [q, r] = a.divmod(b);
  CHECK((q * b + r) == a);
  CHECK(poly_gcd(a * b, b) == b.monic());
  CHECK(a.eval(1) == 2);
  CHECK(Poly(F).str() == "0");
  CHECK(Poly::parse(F, "0").is_zero());

  // minimal polynomial oracle cross-check: scan all monic quadratics
  const FieldSpec& f9 = build_field(3, 2);
  Embedding eps(F, f9);
  code x = 0;
  for (code t = 0; t < f9.size; ++t)
    if (!eps.in_image(t)) { x = t; break; }
  Poly viaop = minimal_polynomial(x, eps);
  Poly viascan(F);
  for (code c0 = 0; c0 < 3 && viascan.is_zero(); ++c0)
    for (code c1 = 0; c1 < 3; ++c1) {
      Poly cand(F, {c0, c1, 1});
      if (cand.eval_embedded(eps, x) == 0) { viascan = cand; break; }
    }
  CHECK(viaop == viascan);
}
