#include <catch2/catch_amalgamated.hpp>

#include "rcx/cslattice.hpp"

using namespace rcx;
using namespace rcx::gf;
using namespace rcx::laurent;
using namespace rcx::cslattice;

namespace {

bool projectively_equal(const CSElement& a, const CSElement& b) {
  return a.canonical() == b.canonical();
}

CSElement xi_elem(const CSAlgebraRep& R, int i) {
  return CSElement::monomial(R, R.xi[i], 0, RatFun::constant(*R.Fq, 1));
}

}  // namespace

TEST_CASE("algebra relations hold exactly") {
  for (auto [d, q] : std::vector<std::pair<int, long long>>{{2, 3}, {3, 3}, {2, 5}}) {
    CSAlgebraRep R(d, q);
    CSElement z = CSElement::z(R);
    CSElement zd = z;
    for (int t = 1; t < d; ++t) zd = zd * z;
    CSElement expect = CSElement::identity(R).scaled(R.one_plus_y);
    CHECK(zd == expect);  // z^d = (1+y) exactly, not just projectively

    for (int i = 0; i < d; ++i) {
      CSElement lhs = z * xi_elem(R, i);
      CSElement rhs = xi_elem(R, (i + 1) % d) * z;
      CHECK(lhs == rhs);  // z xi_i = xi_{i+1} z
    }
  }
  CHECK_THROWS_AS(CSAlgebraRep(3, 2), parameter_error);
  CHECK_THROWS_AS(CSAlgebraRep(3, 6), parameter_error);
}

TEST_CASE("b_u inverses and the y/(1+y) identity") {
  CSAlgebraRep R(3, 3);
  const FieldSpec& Fq = *R.Fq;
  RatFun y = RatFun::variable(Fq);

  // b * (1 + z^{-1} + z^{-2}) = 1 - z^{-3} = y/(1+y), with z^{-j} = z^{d-j}/(1+y)
  CSElement z = CSElement::z(R);
  CSElement zinv = (z * z).scaled(RatFun::constant(Fq, 1) / R.one_plus_y);
  CSElement b = CSElement::identity(R) - zinv;
  CSElement s = CSElement::identity(R) + zinv + zinv * zinv;
  CSElement expect = CSElement::identity(R).scaled(y / R.one_plus_y);
  CHECK(b * s == expect);

  auto sigma1 = build_sigma1(R);
  CHECK(sigma1.size() == 13);  // (3^3-1)/(3-1)
  for (auto& [bu, binv] : sigma1) {
    CHECK(projectively_equal(bu * binv, CSElement::identity(R)));
    CHECK(projectively_equal(binv * bu, CSElement::identity(R)));
  }
}

TEST_CASE("the splitting sends z to a matrix with z^d = (1+y) I") {
  CSAlgebraRep R(3, 3);
  CSElement z = CSElement::z(R);
  long long T = 24;
  SeriesMatrix zm = z.split_matrix(T);
  SeriesMatrix acc = zm;
  for (int t = 1; t < R.d; ++t) acc = acc.mul(zm);
  for (int i = 0; i < R.d; ++i)
    for (int j = 0; j < R.d; ++j) {
      const LaurentSeries& s = acc.at(i, j);
      if (i == j) {
        CHECK(s.coeff(0) == 1);
        CHECK(s.coeff(1) == 1);
        for (long long e = 2; e < std::min(s.prec, T); ++e) CHECK(s.coeff(e) == 0);
      } else {
        CHECK(s.zero_to_precision());
      }
    }
}

TEST_CASE("generator counts match subspace counts") {
  {
    CSAlgebraRep R(2, 3);
    GeneratorSet gs = enumerate_sigma(R);
    REQUIRE(gs.sigma.size() >= 2);
    CHECK(gs.sigma[1].size() == 4);
    CHECK(gs.total() == 4);
    // d=2: the generator set is closed under inverses
    std::set<std::string> keys;
    for (const auto& g : gs.sigma[1]) keys.insert(g.elem.key());
    for (const auto& g : gs.sigma[1]) CHECK(keys.count(g.inverse.key()) == 1);
  }
  {
    CSAlgebraRep R(3, 3);
    GeneratorSet gs = enumerate_sigma(R);
    CHECK(gs.sigma[1].size() == 13);
    CHECK(gs.sigma[2].size() == 13);
    // words of Sigma_2 elements have length 2 and multiply out correctly
    auto sigma1 = build_sigma1(R);
    for (const auto& g : gs.sigma[2]) {
      REQUIRE(g.word.size() == 2);
      CSElement prod = (sigma1[g.word[0]].first * sigma1[g.word[1]].first).canonical();
      CHECK(prod == g.elem);
    }
  }
}

TEST_CASE("generator relative positions and type additivity") {
  CSAlgebraRep R(3, 3);
  GeneratorSet gs = enumerate_sigma(R);
  for (int i = 1; i < 3; ++i)
    for (const auto& g : gs.sigma[i]) {
      auto rp = rel_position_identity(g.elem);
      auto rel = classify_relation(rp, 3);
      CHECK(rel.neighbor);
      CHECK(rel.distance == 1);
      CHECK(rel.type_offset == i);
    }
  // products accumulate type offsets additively mod d
  const auto& a = gs.sigma[1][3].elem;
  const auto& b = gs.sigma[2][5].elem;
  auto rp = rel_position_identity((a * b).canonical());
  auto rel = classify_relation(rp, 3);
  CHECK(rel.type_offset == (1 + 2) % 3);
}

TEST_CASE("building balls: sizes and simple transitivity") {
  {
    CSAlgebraRep R(3, 3);
    GeneratorSet gs = enumerate_sigma(R);
    BuildingBall b0 = building_ball(R, gs, 0);
    CHECK(b0.size() == 1);
    BuildingBall b1 = building_ball(R, gs, 1);
    CHECK(b1.size() == 27);  // center + 13 + 13
    CHECK(b1.layer_sizes == std::vector<long long>{1, 26});
    // simple transitivity at depth 1: Sigma -> neighbors is a bijection
    CHECK((long long)b1.size() - 1 == gs.total());
  }
  {
    CSAlgebraRep R(2, 3);
    GeneratorSet gs = enumerate_sigma(R);
    BuildingBall b2 = building_ball(R, gs, 2);
    CHECK(b2.size() == 17);  // 1 + 4 + 12: the (q+1)-regular tree
    CHECK(b2.layer_sizes == std::vector<long long>{1, 4, 12});
    BuildingBall b3 = building_ball(R, gs, 3);
    CHECK(b3.size() == 53);  // 17 + 36
    // tree facets are edges
    for (const auto& f : b3.facets) CHECK(f.size() == 2);
  }
}

TEST_CASE("local structure at the center, d=3 q=3") {
  CSAlgebraRep R(3, 3);
  GeneratorSet gs = enumerate_sigma(R);
  BuildingBall ball = building_ball(R, gs, 2);
  LocalStructureReport rep = verify_local_structure(ball, gs);
  CHECK(rep.pass);
  CHECK(rep.facets_through_center == 52);
  CHECK(rep.expected_flag_count == 52);
  CHECK(rep.walls_in_q_plus_1_facets);
  CHECK(rep.neighbor_by_type[1] == 13);
  CHECK(rep.neighbor_by_type[2] == 13);

  // independent flag-count oracle: enumerate the complete flags of F_3^3
  // (a line inside a plane) by brute force over coordinate vectors
  int flags = 0;
  // lines: 1-dim subspaces = 13; for each, planes containing it
  std::vector<std::array<int, 3>> pts;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        if (a || b || c) pts.push_back({a, b, c});
  auto smul = [](int s, std::array<int, 3> v) {
    return std::array<int, 3>{s * v[0] % 3, s * v[1] % 3, s * v[2] % 3};
  };
  std::set<std::set<std::array<int, 3>>> lines;
  for (auto& v : pts) lines.insert({smul(1, v), smul(2, v)});
  REQUIRE(lines.size() == 13);
  for (auto& line : lines) {
    // planes through the line: count 2-dim subspaces containing it
    std::set<std::set<std::array<int, 3>>> planes;
    for (auto& w : pts) {
      if (line.count(w)) continue;
      std::set<std::array<int, 3>> plane;
      auto v0 = *line.begin();
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t) {
          std::array<int, 3> u = {(s * v0[0] + t * w[0]) % 3,
                                  (s * v0[1] + t * w[1]) % 3,
                                  (s * v0[2] + t * w[2]) % 3};
          if (u[0] || u[1] || u[2]) plane.insert(u);
        }
      planes.insert(plane);
    }
    flags += (int)planes.size();
  }
  CHECK(flags == 52);
  CHECK(rep.facets_through_center == flags);
}

TEST_CASE("verify_local_structure rejects thin balls") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  BuildingBall b1 = building_ball(R, gs, 1);
  CHECK_THROWS_AS(verify_local_structure(b1, gs), parameter_error);
  BuildingBall b2 = building_ball(R, gs, 2);
  auto rep = verify_local_structure(b2, gs);
  CHECK(rep.pass);
  CHECK(rep.facets_through_center == 4);  // q+1 edges at the center
}

TEST_CASE("prime-power base field: q = 9") {
  CSAlgebraRep R(2, 9);
  CHECK(R.p == 3);
  CHECK(R.m == 2);
  CSElement z = CSElement::z(R);
  CHECK(z * z == CSElement::identity(R).scaled(R.one_plus_y));
  for (int i = 0; i < 2; ++i) {
    CSElement lhs = z * xi_elem(R, i);
    CSElement rhs = xi_elem(R, (i + 1) % 2) * z;
    CHECK(lhs == rhs);
  }
  GeneratorSet gs = enumerate_sigma(R);
  CHECK(gs.sigma[1].size() == 10);  // (81-1)/(9-1)
  for (const auto& g : gs.sigma[1]) {
    auto rel = classify_relation(rel_position_identity(g.elem), 2);
    CHECK(rel.neighbor);
    CHECK(rel.type_offset == 1);
  }
}

TEST_CASE("ball vertex budget is enforced") {
  CSAlgebraRep R(3, 3);
  GeneratorSet gs = enumerate_sigma(R);
  CHECK_THROWS_AS(building_ball(R, gs, 2, 50), budget_error);
}
