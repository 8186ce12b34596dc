#include <catch2/catch_amalgamated.hpp>

#include "rcx/complex.hpp"

using namespace rcx;
using namespace rcx::gf;
using namespace rcx::cslattice;
using namespace rcx::quotient;
using namespace rcx::cplx;

namespace {

Graph cycle(int n) {
  Graph g;
  g.n = n;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) {
    g.adj[i].push_back((i + 1) % n);
    g.adj[(i + 1) % n].push_back(i);
  }
  g.finalize();
  return g;
}

}  // namespace

TEST_CASE("clique complexes of small graphs") {
  Graph tri = cycle(3);
  auto r3 = clique_complex(tri, 3);
  CHECK(r3.H.facets.size() == 1);
  CHECK(r3.pure);

  auto r6 = clique_complex(cycle(6), 2);
  CHECK(r6.H.facets.size() == 6);
  CHECK(r6.pure);

  // a path has no triangle: as a 3-complex it is impure
  Graph path;
  path.n = 3;
  path.adj = {{1}, {0, 2}, {1}};
  auto rp = clique_complex(path, 3);
  CHECK(rp.H.facets.empty());
  CHECK_FALSE(rp.pure);

  // triangle viewed as a 2-complex contains a 3-clique: impure
  auto r2 = clique_complex(tri, 2);
  CHECK(r2.H.facets.size() == 3);
  CHECK_FALSE(r2.pure);
}

TEST_CASE("Cayley complex of the 720-element partite quotient") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable pgl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 2));
  Graph g = graph_of(pgl);
  CHECK(g.n == 720);
  CHECK(g.edge_count() == 1440);  // 4-regular handshake
  auto res = clique_complex(g, 2);
  CHECK(res.pure);
  CHECK(res.H.facets.size() == 1440);

  PartiteHypergraph H = complex_of(pgl);
  CHECK(H.r == 2);
  CHECK(H.has_types());
  H.validate();

  // facet <-> incidence-edge bijection, and biregularity
  for (int i = 0; i < 2; ++i) {
    BipartiteIncidence B = walls_and_incidence(H, i);
    CHECK(B.edges.size() == H.facets.size());
    CHECK(B.biregular);
    CHECK(B.k_left == 4);
    CHECK(B.l_right == 4);  // d=2: walls are single vertices of degree q+1
  }
}

TEST_CASE("walls and incidences on tiny complexes") {
  // single facet, d = 3
  PartiteHypergraph H;
  H.d = 3;
  H.n = 3;
  H.r = 3;
  H.tau = {0, 1, 2};
  H.facets = {{0, 1, 2}};
  H.validate();
  for (int i = 0; i < 3; ++i) {
    BipartiteIncidence B = walls_and_incidence(H, i);
    CHECK(B.left.size() == 1);
    CHECK(B.walls.size() == 1);
    CHECK(B.edges.size() == 1);
  }

  // d=2 bipartite graph: walls are exactly the other side
  PartiteHypergraph G;
  G.d = 2;
  G.n = 4;
  G.r = 2;
  G.tau = {0, 0, 1, 1};
  G.facets = {{0, 2}, {0, 3}, {1, 2}};
  G.validate();
  BipartiteIncidence B1 = walls_and_incidence(G, 0);
  CHECK(B1.walls.size() == 2);
  CHECK(B1.edges.size() == 3);
}

TEST_CASE("two-step multigraph path counts") {
  // single edge: one left vertex with one loop
  PartiteHypergraph H;
  H.d = 2;
  H.n = 2;
  H.r = 2;
  H.tau = {0, 1};
  H.facets = {{0, 1}};
  MultiGraph M = two_step_multigraph(walls_and_incidence(H, 0));
  CHECK(M.n == 1);
  CHECK(M.loops(0) == 1);

  // star: loops only
  PartiteHypergraph S;
  S.d = 2;
  S.n = 4;
  S.r = 2;
  S.tau = {0, 1, 1, 1};
  S.facets = {{0, 1}, {0, 2}, {0, 3}};
  MultiGraph MS = two_step_multigraph(walls_and_incidence(S, 0));
  CHECK(MS.n == 1);
  CHECK(MS.loops(0) == 3);

  // C_6 with types alternating: each left vertex has 2 loops and reaches the
  // other two left vertices once each
  PartiteHypergraph C;
  C.d = 2;
  C.n = 6;
  C.r = 2;
  C.tau = {0, 1, 0, 1, 0, 1};
  C.facets = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
  MultiGraph MC = two_step_multigraph(walls_and_incidence(C, 0));
  CHECK(MC.n == 3);
  for (int v = 0; v < 3; ++v) {
    CHECK(MC.loops(v) == 2);
    long long row = 0;
    for (auto [w, c] : MC.weight[v]) row += c;
    CHECK(row == 4);  // k_i * l_i
  }
}

TEST_CASE("building ball star: walls through the center meet q+1 facets") {
  CSAlgebraRep R(3, 3);
  GeneratorSet gs = enumerate_sigma(R);
  BuildingBall ball = building_ball(R, gs, 2);
  PartiteHypergraph H;
  H.d = 3;
  H.n = ball.size();
  H.r = 3;
  H.tau.resize(ball.size());
  for (long long i = 0; i < ball.size(); ++i) H.tau[i] = ball.vertices[i].type;
  H.facets = ball.facets;
  H.normalize();
  H.validate();
  for (int i = 1; i < 3; ++i) {
    BipartiteIncidence B = walls_and_incidence(H, i);
    // walls containing the center (vertex 0, type 0) are cotype-i walls
    // through it; each lies in exactly q+1 = 4 facets
    long long checked = 0;
    for (size_t w = 0; w < B.walls.size(); ++w) {
      if (std::find(B.walls[w].begin(), B.walls[w].end(), 0) == B.walls[w].end())
        continue;
      CHECK(B.wall_adj[w].size() == 4);
      ++checked;
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("complex file round-trip and parse errors") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable psl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 1));
  CoverTable cov = cover_group(psl);
  PartiteHypergraph H = complex_of(cov);
  H.validate();

  std::ostringstream os;
  write_complex(H, os);
  std::istringstream is(os.str());
  PartiteHypergraph H2 = read_complex(is);
  CHECK(H2.d == H.d);
  CHECK(H2.n == H.n);
  CHECK(H2.r == H.r);
  CHECK(H2.tau == H.tau);
  CHECK(H2.facets == H.facets);

  std::istringstream bad1("RCX d=2 n=3 r=1\n0 5\n");
  CHECK_THROWS_AS(read_complex(bad1), parameter_error);
  std::istringstream bad2("RCX d=2 n=3 r=1\n0 1 2\n");
  CHECK_THROWS_AS(read_complex(bad2), parameter_error);
  std::istringstream empty_ok("RCX d=2 n=3 r=1\n");
  PartiteHypergraph HE = read_complex(empty_ok);
  CHECK(HE.facets.empty());
}

TEST_CASE("cover facets project to base facets") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable psl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 1));
  CoverTable cov = cover_group(psl);
  PartiteHypergraph base = complex_of(psl);
  PartiteHypergraph top = complex_of(cov);

  std::set<std::vector<int>> base_facets(base.facets.begin(), base.facets.end());
  for (const auto& f : top.facets) {
    std::vector<int> proj;
    for (int v : f) proj.push_back(v / cov.d);
    std::sort(proj.begin(), proj.end());
    CHECK(proj[0] != proj[1]);  // images stay distinct simplices
    CHECK(base_facets.count(proj) == 1);
  }
}
