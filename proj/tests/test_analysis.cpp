#include <catch2/catch_amalgamated.hpp>

#include "rcx/analysis.hpp"
#include "rcx/corpus.hpp"

using namespace rcx;
using namespace rcx::gf;
using namespace rcx::cslattice;
using namespace rcx::quotient;
using namespace rcx::cplx;
using namespace rcx::analysis;
using Catch::Approx;

namespace {

PartiteHypergraph typed_c6() {
  PartiteHypergraph C;
  C.d = 2;
  C.n = 6;
  C.r = 2;
  C.tau = {0, 1, 0, 1, 0, 1};
  C.facets = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
  C.normalize();
  return C;
}

// independent exhaustive oracle: smallest c admitting an assignment with no
// monochromatic facet, by plain odometer enumeration
int chromatic_oracle(const PartiteHypergraph& H, int cmax = 6) {
  if (H.facets.empty()) return H.n > 0 ? 1 : 0;
  for (int c = 1; c <= cmax; ++c) {
    std::vector<int> a(H.n, 0);
    for (;;) {
      bool ok = true;
      for (const auto& f : H.facets) {
        bool mono = true;
        for (size_t i = 1; i < f.size(); ++i)
          if (a[f[i]] != a[f[0]]) { mono = false; break; }
        if (mono) { ok = false; break; }
      }
      if (ok) return c;
      int pos = 0;
      while (pos < H.n && ++a[pos] == c) a[pos++] = 0;
      if (pos == H.n) break;
    }
  }
  return -1;
}

// the (d-1)-partite hypergraph left after deleting the type-i vertices,
// with walls deduplicated
PartiteHypergraph drop_type(const PartiteHypergraph& H, int type) {
  PartiteHypergraph G;
  G.d = H.d - 1;
  G.r = G.d;
  std::vector<int> remap(H.n, -1);
  for (long long v = 0; v < H.n; ++v) {
    if (H.tau[v] == type) continue;
    remap[v] = (int)G.n++;
    G.tau.push_back(H.tau[v] < type ? H.tau[v] : H.tau[v] - 1);
  }
  std::set<std::vector<int>> walls;
  for (const auto& f : H.facets) {
    std::vector<int> w;
    for (int v : f)
      if (H.tau[v] != type) w.push_back(remap[v]);
    std::sort(w.begin(), w.end());
    walls.insert(w);
  }
  G.facets.assign(walls.begin(), walls.end());
  G.normalize();
  return G;
}

}  // namespace

TEST_CASE("discrepancy basics") {
  PartiteHypergraph K = corpus::complete_multipartite({2, 3});
  auto parts = K.vertices_by_type();
  CHECK(discrepancy(K, parts) == Fraction(0));  // full sets
  CHECK(discrepancy(K, {{parts[0][0]}, {parts[1][0], parts[1][2]}}) == Fraction(0));

  PartiteHypergraph C = typed_c6();
  // one vertex and one neighbor: |1/6 - 1/9| = 1/18
  CHECK(discrepancy(C, {{0}, {1}}) == Fraction(1, 18));

  CHECK_THROWS_AS(discrepancy(C, {{1}, {0}}), parameter_error);  // wrong types
}

TEST_CASE("bipartite mixing on the 6-cycle and complete bipartite graphs") {
  PartiteHypergraph C = typed_c6();
  Graph g = C.skeleton();
  std::vector<int> part(6);
  for (int v = 0; v < 6; ++v) part[v] = C.tau[v];
  BipartiteView view = bipartite_view(g, part);
  REQUIRE(view.biregular);

  // lambda(C_6) = 1
  MixingCheck m = bipartite_mixing_check(view, {0}, {1}, 1.0);
  CHECK(m.disc == Fraction(1, 18));
  CHECK(m.bound_normalized == Approx(0.5 / 3.0).margin(1e-12));
  CHECK(m.pass_normalized);
  CHECK(m.pass_unnormalized);

  // empty subsets pass with zero on both sides
  MixingCheck me = bipartite_mixing_check(view, {}, {}, 1.0);
  CHECK(me.disc == Fraction(0));
  CHECK(me.pass_normalized);

  // complete bipartite: lambda = 0, every pair passes exactly
  PartiteHypergraph K = corpus::complete_multipartite({3, 3});
  Graph kg = K.skeleton();
  std::vector<int> kpart(6);
  for (int v = 0; v < 6; ++v) kpart[v] = K.tau[v];
  BipartiteView kv = bipartite_view(kg, kpart);
  SplitMix64 rng(77);
  auto kparts = K.vertices_by_type();
  for (int t = 0; t < 50; ++t) {
    std::vector<int> S, T;
    for (int v : kparts[0])
      if (rng.coin()) S.push_back(v);
    for (int v : kparts[1])
      if (rng.coin()) T.push_back(v);
    MixingCheck mk = bipartite_mixing_check(kv, S, T, 0.0);
    CHECK(mk.disc == Fraction(0));
    CHECK(mk.pass_normalized);
  }
}

TEST_CASE("hypergraph mixing: exhaustive on a complete 3-partite complex") {
  PartiteHypergraph H = corpus::complete_multipartite({2, 2, 2});
  auto lambdas = walls_graph_lambdas(H);
  for (double l : lambdas) CHECK(l == Approx(0.0).margin(1e-7));
  DiscrepancyReport rep = hypergraph_mixing_check(H, lambdas, true, 0, 0);
  CHECK(rep.families == 64);
  CHECK(rep.failures == 0);
  CHECK(rep.max_disc == Fraction(0));
  CHECK(rep.pass);
}

TEST_CASE("corpus: type-regularity, discrepancy bound, reduction identity") {
  auto corpus_instances = corpus::mixing_corpus(20250810);
  CHECK(corpus_instances.size() >= 50);
  SplitMix64 rng(99);
  for (const auto& inst : corpus_instances) {
    const PartiteHypergraph& H = inst.H;
    REQUIRE(H.n <= 12);
    auto lambdas = walls_graph_lambdas(H);  // throws unless type-regular

    // exhaustive discrepancy maximum respects the eigenvalue bound
    DiscrepancyReport rep = hypergraph_mixing_check(H, lambdas, true, 0, 0);
    INFO(inst.name);
    CHECK(rep.failures == 0);

    // reduction identity: disc_{H_i}(W minus i) = disc_H(W with V_i in slot i)
    auto parts = H.vertices_by_type();
    for (int i = 0; i < H.d; ++i) {
      PartiteHypergraph Hi = drop_type(H, i);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::vector<int>> W(H.d), Wi(H.d - 1);
        for (int t = 0; t < H.d; ++t) {
          if (t == i) {
            W[t] = parts[t];
            continue;
          }
          for (int v : parts[t])
            if (rng.coin()) W[t].push_back(v);
        }
        // rebuild the same subsets in H_i's numbering (vertices keep order)
        std::vector<int> remap(H.n, -1);
        int next = 0;
        for (long long v = 0; v < H.n; ++v)
          if (H.tau[v] != i) remap[v] = next++;
        for (int t = 0; t < H.d; ++t) {
          if (t == i) continue;
          int tt = t < i ? t : t - 1;
          for (int v : W[t]) Wi[tt].push_back(remap[v]);
        }
        CHECK(discrepancy(H, W) == discrepancy(Hi, Wi));
      }
    }
  }
}

TEST_CASE("weak chromatic numbers match the exhaustive oracle") {
  for (const auto& inst : corpus::chromatic_extras()) {
    ColoringResult ex = chromatic_number(inst.H);
    INFO(inst.name);
    CHECK(ex.proved_optimal);
    CHECK(ex.colors == chromatic_oracle(inst.H));
    ColoringResult gr = chromatic_greedy(inst.H);
    CHECK(gr.colors >= ex.colors);
    // no facet is monochromatic under either coloring
    for (const auto& f : inst.H.facets) {
      bool mono_ex = true, mono_gr = true;
      for (size_t i = 1; i < f.size(); ++i) {
        if (ex.assignment[f[i]] != ex.assignment[f[0]]) mono_ex = false;
        if (gr.assignment[f[i]] != gr.assignment[f[0]]) mono_gr = false;
      }
      CHECK_FALSE(mono_ex);
      CHECK_FALSE(mono_gr);
    }
  }

  // single facet needs exactly two colors; complete graphs need n
  auto extras = corpus::chromatic_extras();
  CHECK(chromatic_number(extras[0].H).colors == 2);   // single facet
  CHECK(chromatic_number(extras[1].H).colors == 3);   // K_3
  CHECK(chromatic_number(extras[3].H).colors == 5);   // K_5

  // fully partite complexes are 2-colorable by grouping types
  auto corpus_instances = corpus::mixing_corpus(20250810);
  int checked = 0;
  for (const auto& inst : corpus_instances) {
    if (inst.H.n > 10 || inst.H.facets.empty()) continue;
    ColoringResult ex = chromatic_number(inst.H);
    CHECK(ex.colors == 2);
    CHECK(ex.colors == chromatic_oracle(inst.H));
    if (++checked > 12) break;
  }
}

TEST_CASE("chromatic lower bound evaluators") {
  auto b = chromatic_lower_bound(81, 2, {0.5, 0.3}, 1);
  CHECK(b.half_form == Approx(1.5).margin(1e-12));  // 81^{1/4} = 3
  auto b2 = chromatic_lower_bound(3, 3, {}, 1);
  CHECK(b2.half_form == Approx(0.5 * std::pow(3.0, 1.0 / 6.0)).margin(1e-12));
  CHECK(b2.half_form < 1.0);  // vacuous but reported
  CHECK_THROWS_AS(chromatic_lower_bound(9, 2, {}, 2), parameter_error);
}

TEST_CASE("injectivity radius machinery") {
  CHECK(tree_ball_sizes(3, 2) == std::vector<long long>{1, 5, 17});

  // the d=2 building ball sizes match the tree count
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  BuildingBall ball = building_ball(R, gs, 3);
  std::vector<long long> cum = {1};
  for (size_t i = 1; i < ball.layer_sizes.size(); ++i)
    cum.push_back(cum.back() + ball.layer_sizes[i]);
  CHECK(cum == tree_ball_sizes(3, 3));

  GroupTable psl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 1));
  Graph g = graph_of(psl);
  RadiusReport rep = injectivity_radius(g, tree_ball_sizes(3, 8), 3, 2, 2);
  CHECK(rep.measured >= 0);
  for (size_t i = 0; i < rep.quotient_sizes.size(); ++i)
    CHECK(rep.quotient_sizes[i] <= rep.building_sizes[i]);

  // an oracle that is too short to see the first disagreement is rejected
  CHECK_THROWS_AS(injectivity_radius(g, tree_ball_sizes(3, 1), 3, 2, 2),
                  parameter_error);
}

TEST_CASE("diameter values and the spectral bound") {
  PartiteHypergraph C = typed_c6();
  Graph c6 = C.skeleton();
  CHECK(eccentricity(c6, 0) == 3);

  PartiteHypergraph K = corpus::complete_multipartite({3, 3});
  // complete graph K_4 as a plain graph
  Graph k4;
  k4.n = 4;
  k4.adj.resize(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) k4.adj[i].push_back(j);
  k4.finalize();
  DiameterReport dr = diameter(k4, false, 3.0, 1.0);
  CHECK(dr.diameter == 1);
  CHECK(dr.pass);

  Graph disc;
  disc.n = 2;
  disc.adj.resize(2);
  CHECK_THROWS_AS(eccentricity(disc, 0), math_error);

  // the 720-element partite quotient: measured diameter under the bound
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable pgl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 2));
  Graph g = graph_of(pgl);
  std::vector<double> ones(g.n, 1.0), alt(g.n);
  for (long long i = 0; i < g.n; ++i) alt[i] = pgl.type_of[i] == 0 ? 1 : -1;
  auto l2 = spectra::second_eigenvalue(spectra::adjacency_operator(g), {ones, alt});
  DiameterReport rep = diameter(g, true, 4.0, l2.max_signed);
  CHECK(rep.pass);
  CHECK(rep.diameter <= rep.bound);
}

TEST_CASE("bipartiteness and odd-walk witnesses") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable pgl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 2));
  GroupTable psl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 1));

  auto bp = bipartiteness_check(graph_of(pgl));
  CHECK(bp.bipartite);
  // the 2-coloring agrees with the type labels up to a global flip
  bool same = true, flip = true;
  for (std::uint32_t i = 0; i < pgl.order; ++i) {
    if (bp.side[i] != pgl.type_of[i]) same = false;
    if (bp.side[i] != 1 - pgl.type_of[i]) flip = false;
  }
  CHECK((same || flip));

  Graph gp = graph_of(psl);
  auto np = bipartiteness_check(gp);
  CHECK_FALSE(np.bipartite);
  REQUIRE(np.odd_walk.size() >= 4);
  CHECK(np.odd_walk.front() == np.odd_walk.back());
  CHECK((np.odd_walk.size() - 1) % 2 == 1);  // odd number of edges
  for (size_t i = 0; i + 1 < np.odd_walk.size(); ++i)
    CHECK(gp.has_edge(np.odd_walk[i], np.odd_walk[i + 1]));

  Graph single;
  single.n = 1;
  single.adj.resize(1);
  CHECK(bipartiteness_check(single).bipartite);
}

TEST_CASE("color-class subsets of the cover have empty crossing sets") {
  CSAlgebraRep R(2, 3);
  GeneratorSet gs = enumerate_sigma(R);
  GroupTable psl = generate_group(R, gs, search_polynomial(*R.Fq, 2, 2, 1));
  CoverTable cov = cover_group(psl);
  PartiteHypergraph top = complex_of(cov);

  // color the base greedily, take the largest class, lift per type
  PartiteHypergraph base = complex_of(psl);
  ColoringResult gr = chromatic_greedy(base);
  std::vector<long long> class_size(gr.colors, 0);
  for (int c : gr.assignment) ++class_size[c];
  int big = (int)(std::max_element(class_size.begin(), class_size.end()) -
                  class_size.begin());
  std::vector<std::vector<int>> W(2);
  for (std::uint32_t v = 0; v < psl.order; ++v) {
    if (gr.assignment[v] != big) continue;
    for (int t = 0; t < 2; ++t) W[t].push_back((int)(v * 2 + t));
  }
  // no facet crosses W_1 x W_2, so the discrepancy equals the product term
  Fraction disc = discrepancy(top, W);
  Fraction prod = Fraction(class_size[big], (long long)psl.order) *
                  Fraction(class_size[big], (long long)psl.order);
  CHECK(disc == prod);
}

TEST_CASE("discrepancy is stable under consistent type relabeling") {
  PartiteHypergraph H = corpus::complete_multipartite({2, 3});
  auto parts = H.vertices_by_type();
  std::vector<std::vector<int>> W = {{parts[0][0]}, {parts[1][1], parts[1][2]}};
  // swap the two type labels and the corresponding subsets
  PartiteHypergraph H2 = H;
  for (auto& t : H2.tau) t = 1 - t;
  std::vector<std::vector<int>> W2 = {W[1], W[0]};
  CHECK(discrepancy(H, W) == discrepancy(H2, W2));
}
