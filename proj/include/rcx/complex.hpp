#pragma once

#include <fstream>
#include <map>
#include <sstream>

#include "rcx/quotient.hpp"

namespace rcx::cplx {

// Simple undirected graph; adjacency lists sorted and deduplicated.
struct Graph {
  long long n = 0;
  std::vector<std::vector<int>> adj;

  void finalize() {
    for (auto& v : adj) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
  bool has_edge(int a, int b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  }
  long long edge_count() const {
    long long e = 0;
    for (const auto& v : adj) e += (long long)v.size();
    return e / 2;
  }
};

inline Graph graph_of(const quotient::GroupTable& t) {
  Graph g;
  g.n = (long long)t.order;
  g.adj.resize(t.order);
  for (std::uint32_t i = 0; i < t.order; ++i)
    for (int s = 0; s < t.num_gens; ++s) {
      std::uint32_t j = t.neighbor(i, s);
      g.adj[i].push_back((int)j);
      g.adj[j].push_back((int)i);
    }
  g.finalize();
  return g;
}

inline Graph graph_of(const quotient::CoverTable& t) {
  Graph g;
  g.n = (long long)t.order;
  g.adj.resize(t.order);
  for (std::uint64_t i = 0; i < t.order; ++i)
    for (int s = 0; s < t.num_gens; ++s) {
      std::uint32_t j = t.adj[(size_t)i * t.num_gens + s];
      g.adj[i].push_back((int)j);
      g.adj[j].push_back((int)i);
    }
  g.finalize();
  return g;
}

// d-uniform hypergraph, optionally d-partite via the type function tau
// (values mod r).  Facets are sorted d-tuples, the list sorted
// lexicographically.
struct PartiteHypergraph {
  int d = 0;
  long long n = 0;
  int r = 1;
  std::vector<int> tau;                  // empty when untyped
  std::vector<std::vector<int>> facets;

  bool has_types() const { return !tau.empty(); }

  void normalize() {
    for (auto& f : facets) std::sort(f.begin(), f.end());
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  }

  void validate() const {
    for (const auto& f : facets) {
      if ((int)f.size() != d)
        throw parameter_error("PartiteHypergraph: facet arity != d");
      for (int v : f)
        if (v < 0 || v >= n)
          throw parameter_error("PartiteHypergraph: vertex index out of range");
      for (size_t i = 1; i < f.size(); ++i)
        if (f[i] == f[i - 1])
          throw parameter_error("PartiteHypergraph: repeated vertex in facet");
      if (has_types() && r == d) {
        std::vector<char> seen(d, 0);
        for (int v : f) {
          if (seen[tau[v]])
            throw parameter_error("PartiteHypergraph: type repeats in a facet");
          seen[tau[v]] = 1;
        }
      }
    }
  }

  Graph skeleton() const {
    Graph g;
    g.n = n;
    g.adj.resize(n);
    for (const auto& f : facets)
      for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j) {
          g.adj[f[i]].push_back(f[j]);
          g.adj[f[j]].push_back(f[i]);
        }
    g.finalize();
    return g;
  }

  std::vector<std::vector<int>> vertices_by_type() const {
    std::vector<std::vector<int>> out(r);
    for (long long v = 0; v < n; ++v) out[tau[v]].push_back((int)v);
    return out;
  }
};

struct CliqueComplexResult {
  PartiteHypergraph H;
  bool pure;
  std::string impurity;  // description of the first purity violation
};

// Facets = all d-cliques of the graph, enumerated by ordered expansion over
// sorted adjacency.  Purity (every maximal clique has size exactly d) is
// checked and reported, not enforced: the check covers isolated vertices,
// facet-free edges, over-sized cliques, and for d >= 4 also facet-free
// triangles and deeper faces via direct maximal-clique enumeration.
inline CliqueComplexResult clique_complex(const Graph& g, int d) {
  CliqueComplexResult res;
  res.H.d = d;
  res.H.n = g.n;
  res.pure = true;

  // d-cliques: extend increasing tuples through neighbor intersections
  std::vector<int> clique;
  std::function<void(const std::vector<int>&)> extend =
      [&](const std::vector<int>& cands) {
        if ((int)clique.size() == d) {
          res.H.facets.push_back(clique);
          return;
        }
        int need = d - (int)clique.size();
        if ((int)cands.size() < need) return;
        for (int c : cands) {
          std::vector<int> nxt;
          for (int x : cands)
            if (x > c && g.has_edge(c, x)) nxt.push_back(x);
          clique.push_back(c);
          extend(nxt);
          clique.pop_back();
        }
      };
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> cands;
    for (int u : g.adj[v])
      if (u > v) cands.push_back(u);
    clique.push_back(v);
    if (d == 1)
      res.H.facets.push_back(clique);
    else
      extend(cands);
    clique.pop_back();
  }

  // purity checks
  std::vector<char> in_facet(g.n, 0);
  std::set<std::pair<int, int>> facet_edges;
  for (const auto& f : res.H.facets) {
    for (int v : f) in_facet[v] = 1;
    for (size_t i = 0; i < f.size(); ++i)
      for (size_t j = i + 1; j < f.size(); ++j)
        facet_edges.insert({f[i], f[j]});
  }
  for (int v = 0; v < g.n && res.pure; ++v)
    if (!in_facet[v]) {
      res.pure = false;
      res.impurity = "vertex " + std::to_string(v) + " lies in no facet";
    }
  for (int v = 0; v < g.n && res.pure; ++v)
    for (int u : g.adj[v]) {
      if (u < v) continue;
      if (!facet_edges.count({v, u})) {
        res.pure = false;
        res.impurity = "edge (" + std::to_string(v) + "," + std::to_string(u) +
                       ") lies in no facet";
        break;
      }
    }
  // an extension vertex adjacent to a whole facet gives a (d+1)-clique
  for (const auto& f : res.H.facets) {
    if (!res.pure) break;
    for (int u : g.adj[f[0]]) {
      bool all = true;
      for (int c : f)
        if (u == c || !g.has_edge(c, u)) { all = false; break; }
      if (all) {
        res.pure = false;
        res.impurity = "a clique of size " + std::to_string(d + 1) + " exists";
        break;
      }
    }
  }
  // for d >= 4, intermediate faces may still be maximal; enumerate maximal
  // cliques directly at ball scale
  if (res.pure && d >= 4) {
    if (g.n > 20000)
      throw budget_error("clique_complex: purity audit beyond budget for d >= 4");
    std::function<void(std::vector<int>&, std::vector<int>&, std::vector<int>&)> bk =
        [&](std::vector<int>& Rset, std::vector<int>& P, std::vector<int>& X) {
          if (P.empty() && X.empty()) {
            if ((int)Rset.size() != d) {
              res.pure = false;
              res.impurity =
                  "maximal clique of size " + std::to_string(Rset.size());
            }
            return;
          }
          std::vector<int> Pcopy = P;
          for (int v : Pcopy) {
            if (!res.pure) return;
            std::vector<int> P2, X2;
            for (int u : P)
              if (g.has_edge(u, v) && u != v) P2.push_back(u);
            for (int u : X)
              if (g.has_edge(u, v)) X2.push_back(u);
            Rset.push_back(v);
            bk(Rset, P2, X2);
            Rset.pop_back();
            P.erase(std::remove(P.begin(), P.end(), v), P.end());
            X.push_back(v);
          }
        };
    std::vector<int> Rset, P(g.n), X;
    for (long long i = 0; i < g.n; ++i) P[i] = (int)i;
    bk(Rset, P, X);
  }
  res.H.normalize();
  return res;
}

// Bipartite "vertices versus walls" graph for type i: left vertices are the
// type-i vertices, right vertices the cotype-i walls; one edge per facet.
struct BipartiteIncidence {
  int type;
  std::vector<int> left;                   // vertex ids of type i
  std::vector<std::vector<int>> walls;     // sorted (d-1)-tuples
  std::vector<std::pair<int, int>> edges;  // (left index, wall index)
  std::vector<std::vector<int>> left_adj;  // wall indices per left vertex
  std::vector<std::vector<int>> wall_adj;  // left indices per wall
  long long k_left = 0;   // common left degree when biregular
  long long l_right = 0;  // common right degree when biregular
  bool biregular = false;
};

inline BipartiteIncidence walls_and_incidence(const PartiteHypergraph& H, int type) {
  if (!H.has_types() || H.r != H.d)
    throw parameter_error("walls_and_incidence: need a full d-type function");
  BipartiteIncidence B;
  B.type = type;
  std::vector<int> left_index(H.n, -1);
  for (long long v = 0; v < H.n; ++v)
    if (H.tau[v] == type) {
      left_index[v] = (int)B.left.size();
      B.left.push_back((int)v);
    }
  std::map<std::vector<int>, int> wall_index;
  for (const auto& f : H.facets) {
    int tv = -1;
    std::vector<int> w;
    for (int v : f) {
      if (H.tau[v] == type)
        tv = v;
      else
        w.push_back(v);
    }
    if (tv < 0) throw consistency_error("walls_and_incidence: facet misses a type");
    auto [it, fresh] = wall_index.emplace(w, (int)B.walls.size());
    if (fresh) B.walls.push_back(w);
    B.edges.push_back({left_index[tv], it->second});
  }
  B.left_adj.resize(B.left.size());
  B.wall_adj.resize(B.walls.size());
  for (auto [l, w] : B.edges) {
    B.left_adj[l].push_back(w);
    B.wall_adj[w].push_back(l);
  }
  B.biregular = true;
  B.k_left = B.left_adj.empty() ? 0 : (long long)B.left_adj[0].size();
  for (const auto& a : B.left_adj)
    if ((long long)a.size() != B.k_left) B.biregular = false;
  B.l_right = B.wall_adj.empty() ? 0 : (long long)B.wall_adj[0].size();
  for (const auto& a : B.wall_adj)
    if ((long long)a.size() != B.l_right) B.biregular = false;
  return B;
}

// Two-step multigraph on the left vertices: entry (v, w) counts the paths of
// length 2 through walls; loops count the degree of v.
struct MultiGraph {
  long long n = 0;
  std::vector<std::map<int, long long>> weight;  // includes loops at v

  long long loops(int v) const {
    auto it = weight[v].find(v);
    return it == weight[v].end() ? 0 : it->second;
  }
};

inline MultiGraph two_step_multigraph(const BipartiteIncidence& B) {
  MultiGraph M;
  M.n = (long long)B.left.size();
  M.weight.resize(M.n);
  for (const auto& wl : B.wall_adj)
    for (int a : wl)
      for (int b : wl) ++M.weight[a][b];
  return M;
}

// Text format: "RCX d=<d> n=<n> r=<r>", optional "types: ..." line, then one
// facet per line.  Facets are written sorted lexicographically.
inline void write_complex(const PartiteHypergraph& H, std::ostream& os) {
  os << "RCX d=" << H.d << " n=" << H.n << " r=" << H.r << "\n";
  if (H.has_types()) {
    os << "types:";
    for (long long v = 0; v < H.n; ++v) os << ' ' << H.tau[v];
    os << "\n";
  }
  for (const auto& f : H.facets) {
    for (size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << "\n";
  }
}

inline void write_complex(const PartiteHypergraph& H, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parameter_error("write_complex: cannot open " + path);
  PartiteHypergraph copy = H;
  copy.normalize();
  write_complex(copy, os);
}

inline PartiteHypergraph read_complex(std::istream& is) {
  PartiteHypergraph H;
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line))
    throw parameter_error("read_complex: empty input");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string tag, kd, kn, kr;
    hs >> tag >> kd >> kn >> kr;
    auto val = [&](const std::string& s, const char* key) {
      if (s.rfind(key, 0) != 0)
        throw parameter_error("read_complex: bad header at line 1");
      return std::stoll(s.substr(std::string(key).size()));
    };
    if (tag != "RCX") throw parameter_error("read_complex: missing RCX tag");
    H.d = (int)val(kd, "d=");
    H.n = val(kn, "n=");
    H.r = (int)val(kr, "r=");
  }
  bool first_body = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (first_body && line.rfind("types:", 0) == 0) {
      std::istringstream ts(line.substr(6));
      int t;
      while (ts >> t) {
        if (t < 0 || t >= H.r)
          throw parameter_error("read_complex: type out of range at line " +
                                std::to_string(lineno));
        H.tau.push_back(t);
      }
      if ((long long)H.tau.size() != H.n)
        throw parameter_error("read_complex: types count != n at line " +
                              std::to_string(lineno));
      first_body = false;
      continue;
    }
    first_body = false;
    std::istringstream fs(line);
    std::vector<int> f;
    long long v;
    while (fs >> v) {
      if (v < 0 || v >= H.n)
        throw parameter_error("read_complex: vertex out of range at line " +
                              std::to_string(lineno));
      f.push_back((int)v);
    }
    if ((int)f.size() != H.d)
      throw parameter_error("read_complex: facet arity != d at line " +
                            std::to_string(lineno));
    H.facets.push_back(std::move(f));
  }
  H.normalize();
  H.validate();
  return H;
}

inline PartiteHypergraph read_complex(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw parameter_error("read_complex: cannot open " + path);
  return read_complex(is);
}

// Quotient complexes as hypergraphs: the Cayley complex of the quotient
// group (facets = d-cliques), carrying the r-type labels.  Quotients with
// injectivity radius >= 2 are pure, so impurity here is treated as a failure
// rather than a warning.
inline PartiteHypergraph complex_of(const quotient::GroupTable& t) {
  CliqueComplexResult res = clique_complex(graph_of(t), t.d);
  if (!res.pure)
    throw consistency_error("complex_of: impure quotient complex: " + res.impurity);
  res.H.r = t.r;
  if (t.r > 1) res.H.tau = t.type_of;
  res.H.normalize();
  return res.H;
}

inline PartiteHypergraph complex_of(const quotient::CoverTable& t) {
  CliqueComplexResult res = clique_complex(graph_of(t), t.d);
  if (!res.pure)
    throw consistency_error("complex_of: impure cover complex: " + res.impurity);
  res.H.r = t.d;
  res.H.tau = t.type_of;
  res.H.normalize();
  return res.H;
}

}  // namespace rcx::cplx
