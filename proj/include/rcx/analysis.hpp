#pragma once

#include <cmath>

#include "rcx/spectra.hpp"

namespace rcx::analysis {

using cplx::BipartiteIncidence;
using cplx::Graph;
using cplx::PartiteHypergraph;

// ---- discrepancy ----

// |E(W_1,...,W_d)|: facets with every vertex inside its type's chosen set.
inline long long count_crossing_facets(const PartiteHypergraph& H,
                                       const std::vector<std::vector<char>>& member) {
  long long c = 0;
  for (const auto& f : H.facets) {
    bool all = true;
    for (int v : f)
      if (!member[H.tau[v]][v]) { all = false; break; }
    if (all) ++c;
  }
  return c;
}

// Exact discrepancy |E(W)|/|E| - prod |W_i|/|V_i|.
inline Fraction discrepancy(const PartiteHypergraph& H,
                            const std::vector<std::vector<int>>& W) {
  if (!H.has_types() || H.r != H.d)
    throw parameter_error("discrepancy: need a full d-type function");
  if ((int)W.size() != H.d) throw parameter_error("discrepancy: need one set per type");
  auto parts = H.vertices_by_type();
  std::vector<std::vector<char>> member(H.d, std::vector<char>(H.n, 0));
  std::vector<long long> wsize(H.d), vsize(H.d);
  for (int t = 0; t < H.d; ++t) {
    vsize[t] = (long long)parts[t].size();
    wsize[t] = (long long)W[t].size();
    for (int v : W[t]) {
      if (v < 0 || v >= H.n || H.tau[v] != t)
        throw parameter_error("discrepancy: W_i not inside V_i");
      member[t][v] = 1;
    }
  }
  long long e = (long long)H.facets.size();
  if (e == 0) throw parameter_error("discrepancy: empty facet list");
  Fraction lhs(count_crossing_facets(H, member), e);
  Fraction rhs(1);
  for (int t = 0; t < H.d; ++t) rhs = rhs * Fraction(wsize[t], vsize[t]);
  return (lhs - rhs).abs();
}

// ---- bipartite mixing ----

struct BipartiteView {
  const Graph* g;
  std::vector<int> part;  // 0/1 per vertex
  std::vector<int> v1, v2;
  long long k1 = 0, k2 = 0;  // degrees (biregular)
  long long edges = 0;
  bool biregular = true;
};

inline BipartiteView bipartite_view(const Graph& g, const std::vector<int>& part) {
  BipartiteView b;
  b.g = &g;
  b.part = part;
  for (long long v = 0; v < g.n; ++v) (part[v] == 0 ? b.v1 : b.v2).push_back((int)v);
  for (long long v = 0; v < g.n; ++v)
    for (int u : g.adj[v])
      if (part[v] == part[u])
        throw parameter_error("bipartite_view: edge inside a part");
  b.k1 = b.v1.empty() ? 0 : (long long)g.adj[b.v1[0]].size();
  b.k2 = b.v2.empty() ? 0 : (long long)g.adj[b.v2[0]].size();
  for (int v : b.v1)
    if ((long long)g.adj[v].size() != b.k1) b.biregular = false;
  for (int v : b.v2)
    if ((long long)g.adj[v].size() != b.k2) b.biregular = false;
  b.edges = g.edge_count();
  return b;
}

struct MixingCheck {
  long long crossing;      // |E(S,T)|
  Fraction disc;           // exact
  double bound_normalized; // lambda~ sqrt(|S||T| / |V1||V2|)
  bool pass_normalized;
  double lhs_unnormalized; // | |E(S,T)| - sqrt(k1 k2)|S||T|/sqrt(|V1||V2|) |
  double bound_unnormalized;  // lambda sqrt(|S||T|)
  bool pass_unnormalized;
};

inline MixingCheck bipartite_mixing_check(const BipartiteView& b,
                                          const std::vector<int>& S,
                                          const std::vector<int>& T,
                                          double lambda) {
  if (!b.biregular) throw parameter_error("bipartite_mixing_check: not biregular");
  std::vector<char> inT(b.g->n, 0);
  for (int t : T) {
    if (b.part[t] != 1) throw parameter_error("bipartite_mixing_check: T not in V2");
    inT[t] = 1;
  }
  MixingCheck m{};
  for (int s : S) {
    if (b.part[s] != 0) throw parameter_error("bipartite_mixing_check: S not in V1");
    for (int u : b.g->adj[s]) m.crossing += inT[u];
  }
  long long n1 = (long long)b.v1.size(), n2 = (long long)b.v2.size();
  m.disc = (Fraction(m.crossing, b.edges) -
            Fraction((long long)S.size(), n1) * Fraction((long long)T.size(), n2))
               .abs();
  double lam_norm = lambda / std::sqrt(double(b.k1) * double(b.k2));
  m.bound_normalized =
      lam_norm * std::sqrt(double(S.size()) * double(T.size()) / (double(n1) * double(n2)));
  m.pass_normalized = m.disc.value() <= m.bound_normalized + 1e-12;
  double expected = std::sqrt(double(b.k1) * double(b.k2)) * double(S.size()) *
                    double(T.size()) / std::sqrt(double(n1) * double(n2));
  m.lhs_unnormalized = std::abs(double(m.crossing) - expected);
  m.bound_unnormalized = lambda * std::sqrt(double(S.size()) * double(T.size()));
  m.pass_unnormalized = m.lhs_unnormalized <= m.bound_unnormalized + 1e-12;
  return m;
}

// ---- hypergraph mixing ----

struct DiscrepancySample {
  std::vector<long long> wsizes;
  long long crossing;  // |E(W_1,...,W_d)|
  Fraction disc;
  double bound;
  bool pass;
};

struct DiscrepancyReport {
  int d = 0;
  std::uint64_t seed = 0;
  long long families = 0;
  long long failures = 0;
  Fraction max_disc;
  double max_bound_gap = -1;  // max of disc - bound (negative = margin)
  std::vector<double> lambda_tilde;
  double theorem_bound = 0;   // 2d/sqrt(q) when a building quotient, else 0
  long long theorem_failures = 0;
  bool pass = true;
};

// Normalized second eigenvalues of the vertices-versus-walls graphs
// B_1..B_{d-1}; requires type-regularity.
inline std::vector<double> walls_graph_lambdas(const PartiteHypergraph& H,
                                               long long dense_threshold = 4096) {
  std::vector<double> out;
  for (int i = 0; i + 1 < H.d; ++i) {
    BipartiteIncidence B = walls_and_incidence(H, i);
    if (!B.biregular)
      throw parameter_error("walls_graph_lambdas: type-regularity fails at type " +
                            std::to_string(i));
    auto r = spectra::second_eigenvalue(spectra::incidence_operator(B),
                                        spectra::biregular_extremal_pair(B), 1e-6,
                                        dense_threshold);
    out.push_back(spectra::normalized_lambda(B.k_left, B.l_right, r.max_abs));
  }
  return out;
}

inline double cor_disc_bound(const std::vector<double>& lambdas,
                             const std::vector<long long>& wsizes,
                             const std::vector<long long>& vsizes) {
  double b = 0;
  for (size_t i = 0; i < lambdas.size(); ++i)
    b += lambdas[i] * std::sqrt(double(wsizes[i]) / double(vsizes[i]));
  return b;
}

// Exhaustive or sampled verification of the discrepancy inequality over
// chosen subsets W_i.  q > 0 marks a building quotient, adding the 2d/sqrt(q)
// comparison.
inline DiscrepancyReport hypergraph_mixing_check(
    const PartiteHypergraph& H, const std::vector<double>& lambdas, bool exhaustive,
    std::uint64_t seed, long long samples, long long q = 0,
    std::vector<DiscrepancySample>* trace = nullptr) {
  if (!H.has_types() || H.r != H.d)
    throw parameter_error("hypergraph_mixing_check: need a full d-type function");
  if ((int)lambdas.size() != H.d - 1)
    throw parameter_error("hypergraph_mixing_check: need d-1 eigenvalue bounds");
  auto parts = H.vertices_by_type();
  DiscrepancyReport rep;
  rep.d = H.d;
  rep.seed = seed;
  rep.lambda_tilde = lambdas;
  rep.max_disc = Fraction(0);
  if (q > 0) rep.theorem_bound = 2.0 * H.d / std::sqrt((double)q);

  long long total_bits = 0;
  for (const auto& p : parts) total_bits += (long long)p.size();
  if (exhaustive && total_bits > 24)
    throw budget_error("hypergraph_mixing_check: exhaustive mode over budget");

  std::vector<std::vector<char>> member(H.d, std::vector<char>(H.n, 0));
  std::vector<long long> wsizes(H.d), vsizes(H.d);
  for (int t = 0; t < H.d; ++t) vsizes[t] = (long long)parts[t].size();
  long long e = (long long)H.facets.size();
  if (e == 0)
    throw parameter_error("hypergraph_mixing_check: empty facet list");

  auto run_family = [&](SplitMix64* rng, std::uint64_t mask_seed) {
    // choose W_i either from the exhaustive mask or by per-family coin flips
    long long bit = 0;
    for (int t = 0; t < H.d; ++t) {
      wsizes[t] = 0;
      for (int v : parts[t]) {
        bool in = rng ? rng->coin() : ((mask_seed >> bit) & 1ULL);
        ++bit;
        member[t][v] = in;
        wsizes[t] += in;
      }
    }
    long long crossing = count_crossing_facets(H, member);
    Fraction lhs(crossing, e);
    Fraction prod(1);
    for (int t = 0; t < H.d; ++t) prod = prod * Fraction(wsizes[t], vsizes[t]);
    Fraction disc = (lhs - prod).abs();
    double bound = cor_disc_bound(lambdas, wsizes, vsizes);
    DiscrepancySample s{wsizes, crossing, disc, bound, disc.value() <= bound + 1e-12};
    ++rep.families;
    if (!s.pass) ++rep.failures;
    if (rep.max_disc < disc) rep.max_disc = disc;
    rep.max_bound_gap = std::max(rep.max_bound_gap, disc.value() - bound);
    if (q > 0 && disc.value() > rep.theorem_bound + 1e-12) ++rep.theorem_failures;
    if (trace) trace->push_back(std::move(s));
  };

  if (exhaustive) {
    std::uint64_t limit = 1ULL << total_bits;
    for (std::uint64_t mask = 0; mask < limit; ++mask) run_family(nullptr, mask);
  } else {
    // per-index seeding keeps sample t identical regardless of scheduling
    for (long long t = 0; t < samples; ++t) {
      SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t)(t + 1)));
      run_family(&rng, 0);
    }
  }
  rep.pass = rep.failures == 0 && rep.theorem_failures == 0;
  return rep;
}

// ---- weak chromatic number ----

struct ColoringResult {
  int colors = 0;
  std::vector<int> assignment;
  std::string mode;       // "exact" | "greedy"
  bool proved_optimal = false;  // exact: search at colors-1 exhausted
  long long nodes = 0;
};

namespace detail {

// facets indexed per vertex, vertices ordered by decreasing facet degree
struct ChromaticContext {
  const PartiteHypergraph* H;
  std::vector<std::vector<int>> facets_of;
  std::vector<int> order;

  explicit ChromaticContext(const PartiteHypergraph& h) : H(&h) {
    facets_of.resize(h.n);
    for (size_t fi = 0; fi < h.facets.size(); ++fi)
      for (int v : h.facets[fi]) facets_of[v].push_back((int)fi);
    order.resize(h.n);
    for (long long i = 0; i < h.n; ++i) order[i] = (int)i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return facets_of[a].size() > facets_of[b].size();
    });
  }

  // would coloring v with c complete a monochromatic facet?
  bool completes_mono(const std::vector<int>& color, int v, int c) const {
    for (int fi : facets_of[v]) {
      bool mono = true;
      for (int u : H->facets[fi]) {
        if (u == v) continue;
        if (color[u] != c) { mono = false; break; }
      }
      if (mono) return true;
    }
    return false;
  }
};

inline bool backtrack(const ChromaticContext& ctx, std::vector<int>& color,
                      size_t pos, int used, int ccount, long long& nodes,
                      long long budget) {
  if (pos == ctx.order.size()) return true;
  if (++nodes > budget)
    throw budget_error("chromatic_number: node budget exhausted");
  int v = ctx.order[pos];
  int cap = std::min(ccount, used + 1);  // new colors introduced in order
  for (int c = 0; c < cap; ++c) {
    if (ctx.completes_mono(color, v, c)) continue;
    color[v] = c;
    if (backtrack(ctx, color, pos + 1, std::max(used, c + 1), ccount, nodes,
                  budget))
      return true;
    color[v] = -1;
  }
  return false;
}

}  // namespace detail

inline ColoringResult chromatic_greedy(const PartiteHypergraph& H) {
  detail::ChromaticContext ctx(H);
  ColoringResult r;
  r.mode = "greedy";
  r.assignment.assign(H.n, -1);
  for (int v : ctx.order) {
    int c = 0;
    while (ctx.completes_mono(r.assignment, v, c)) ++c;
    r.assignment[v] = c;
    r.colors = std::max(r.colors, c + 1);
  }
  return r;
}

// Minimal number of colors with no monochromatic facet, by incremental
// backtracking with facet-violation pruning; vertex 0 in the chosen order is
// pinned to color 0 and new colors are introduced in increasing order.
inline ColoringResult chromatic_number(const PartiteHypergraph& H,
                                       long long budget = 50'000'000) {
  if (H.n > 60) throw parameter_error("chromatic_number: exact mode capped at 60 vertices");
  detail::ChromaticContext ctx(H);
  ColoringResult r;
  r.mode = "exact";
  if (H.facets.empty()) {
    r.colors = H.n > 0 ? 1 : 0;
    r.assignment.assign(H.n, 0);
    r.proved_optimal = true;
    return r;
  }
  ColoringResult ub = chromatic_greedy(H);
  for (int c = 1; c <= ub.colors; ++c) {
    std::vector<int> color(H.n, -1);
    long long nodes = 0;
    bool ok = detail::backtrack(ctx, color, 0, 0, c, nodes, budget);
    r.nodes += nodes;
    if (ok) {
      r.colors = c;
      r.assignment = color;
      r.proved_optimal = true;
      return r;
    }
  }
  throw consistency_error("chromatic_number: greedy bound unreachable");
}

struct ChromaticBounds {
  double half_form;     // (1/2) q^{1/(2d)}
  double exact_form;    // (2d)^{-1/d} q^{1/(2d)}
  double empirical;     // (sum lambda~_i)^{-1/d} from the measured eigenvalues
};

// Lower bounds for the chromatic number of a non-partite quotient.
inline ChromaticBounds chromatic_lower_bound(long long q, int d,
                                             const std::vector<double>& lambdas,
                                             int partite_r) {
  if (partite_r != 1)
    throw parameter_error("chromatic_lower_bound: quotient must be non-partite");
  ChromaticBounds b{};
  double root = std::pow((double)q, 1.0 / (2.0 * d));
  b.half_form = 0.5 * root;
  b.exact_form = std::pow(2.0 * d, -1.0 / d) * root;
  double s = 0;
  for (double l : lambdas) s += l;
  b.empirical = s > 0 ? std::pow(s, -1.0 / d) : std::numeric_limits<double>::infinity();
  return b;
}

// ---- injectivity radius ----

struct RadiusReport {
  int measured;                       // max radius with ball-size equality
  std::vector<long long> quotient_sizes;  // cumulative ball sizes by radius
  std::vector<long long> building_sizes;
  double cor_bound_value;             // log_q |X| / (2(d-1)(d^2-1)) - 1/2
  int required_from_cor;              // ceil of the above
  double dist_bound;                  // deg(f)/d lower bound for dist
  bool pass;
};

// Cumulative ball sizes of the (q+1)-regular tree (the d = 2 building).
inline std::vector<long long> tree_ball_sizes(long long q, int radius) {
  std::vector<long long> out = {1};
  long long sphere = q + 1, total = 1;
  for (int r = 1; r <= radius; ++r) {
    total += sphere;
    out.push_back(total);
    sphere *= q;
  }
  return out;
}

inline std::vector<long long> bfs_ball_sizes(const Graph& g, int start, int radius) {
  std::vector<int> dist(g.n, -1);
  std::deque<int> dq = {start};
  dist[start] = 0;
  std::vector<long long> cum(radius + 1, 0);
  cum[0] = 1;
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    if (dist[v] == radius) continue;
    for (int u : g.adj[v])
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        ++cum[dist[u]];
        dq.push_back(u);
      }
  }
  for (int r = 1; r <= radius; ++r) cum[r] += cum[r - 1];
  return cum;
}

// Operational injectivity radius: the largest r with quotient ball size equal
// to the building ball size (vertex-transitive quotients, single BFS).
inline RadiusReport injectivity_radius(const Graph& g,
                                       const std::vector<long long>& building_sizes,
                                       long long q, int d, int e) {
  RadiusReport rep{};
  int max_r = (int)building_sizes.size() - 1;
  rep.building_sizes = building_sizes;
  rep.quotient_sizes = bfs_ball_sizes(g, 0, max_r);
  rep.measured = 0;
  for (int r = 0; r <= max_r; ++r) {
    if (rep.quotient_sizes[r] > rep.building_sizes[r])
      throw consistency_error("injectivity_radius: quotient ball exceeds building ball");
    if (rep.quotient_sizes[r] == rep.building_sizes[r])
      rep.measured = r;
    else
      break;
  }
  if (rep.measured == max_r && rep.quotient_sizes[max_r] < (long long)g.n)
    throw parameter_error("injectivity_radius: building oracle radius insufficient");
  rep.cor_bound_value = std::log((double)g.n) / std::log((double)q) /
                            (2.0 * (d - 1) * (d * d - 1)) -
                        0.5;
  rep.required_from_cor = (int)std::ceil(rep.cor_bound_value - 1e-9);
  rep.dist_bound = double(e) / d;
  rep.pass = rep.measured >= rep.required_from_cor;
  return rep;
}

// ---- diameter ----

struct DiameterReport {
  long long diameter;
  double lambda1, lambda2;
  double bound;  // log n / log(lambda1/lambda2)
  bool pass;
};

inline long long eccentricity(const Graph& g, int start) {
  std::vector<int> dist(g.n, -1);
  std::deque<int> dq = {start};
  dist[start] = 0;
  long long ecc = 0;
  long long seen = 1;
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    for (int u : g.adj[v])
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        ecc = std::max<long long>(ecc, dist[u]);
        ++seen;
        dq.push_back(u);
      }
  }
  if (seen != g.n) throw math_error("eccentricity: graph is disconnected");
  return ecc;
}

// Exact diameter (single BFS when vertex-transitive, else all sources) and
// the spectral upper bound with measured eigenvalues.
inline DiameterReport diameter(const Graph& g, bool vertex_transitive,
                               double lambda1, double lambda2) {
  DiameterReport rep{};
  if (vertex_transitive) {
    rep.diameter = eccentricity(g, 0);
  } else {
    rep.diameter = 0;
    for (int v = 0; v < g.n; ++v)
      rep.diameter = std::max(rep.diameter, eccentricity(g, v));
  }
  rep.lambda1 = lambda1;
  rep.lambda2 = lambda2;
  if (lambda2 <= 0 || lambda1 <= lambda2)
    throw parameter_error("diameter: spectral bound needs lambda1 > lambda2 > 0");
  rep.bound = std::log((double)g.n) / std::log(lambda1 / lambda2);
  rep.pass = (double)rep.diameter <= rep.bound + 1e-9;
  return rep;
}

// ---- bipartiteness ----

struct BipartitenessResult {
  bool bipartite;
  std::vector<int> side;      // 2-coloring when bipartite
  std::vector<int> odd_walk;  // closed walk of odd length otherwise
};

inline BipartitenessResult bipartiteness_check(const Graph& g) {
  BipartitenessResult res;
  res.side.assign(g.n, -1);
  std::vector<int> parent(g.n, -1);
  for (int root = 0; root < g.n; ++root) {
    if (res.side[root] >= 0) continue;
    res.side[root] = 0;
    std::deque<int> dq = {root};
    while (!dq.empty()) {
      int v = dq.front();
      dq.pop_front();
      for (int u : g.adj[v]) {
        if (res.side[u] < 0) {
          res.side[u] = res.side[v] ^ 1;
          parent[u] = v;
          dq.push_back(u);
        } else if (res.side[u] == res.side[v]) {
          // odd closed walk: v up to the root, then root down to u, then back
          std::vector<int> up, down;
          for (int x = v; x >= 0; x = parent[x]) up.push_back(x);
          for (int x = u; x >= 0; x = parent[x]) down.push_back(x);
          std::reverse(up.begin(), up.end());
          res.odd_walk = up;
          res.odd_walk.insert(res.odd_walk.end(), down.begin(), down.end());
          res.bipartite = false;
          return res;
        }
      }
    }
  }
  res.bipartite = true;
  return res;
}

}  // namespace rcx::analysis
