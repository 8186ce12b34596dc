#pragma once

#include "rcx/analysis.hpp"

namespace rcx::corpus {

using cplx::PartiteHypergraph;

// Seeded corpus of small type-regular partite hypergraphs (d = 2, 3, at most
// 12 vertices).  Every instance is type-regular by construction: complete
// multipartite, bipartite circulants, Latin-square complexes, and unions of
// discordant Latin squares.

struct Instance {
  std::string name;
  PartiteHypergraph H;
};

inline PartiteHypergraph complete_multipartite(const std::vector<int>& sizes) {
  PartiteHypergraph H;
  H.d = (int)sizes.size();
  H.r = H.d;
  H.n = 0;
  std::vector<std::vector<int>> parts;
  for (int t = 0; t < H.d; ++t) {
    std::vector<int> p;
    for (int i = 0; i < sizes[t]; ++i) {
      p.push_back((int)H.n++);
      H.tau.push_back(t);
    }
    parts.push_back(p);
  }
  std::vector<int> f(H.d);
  std::function<void(int)> rec = [&](int t) {
    if (t == H.d) {
      H.facets.push_back(f);
      return;
    }
    for (int v : parts[t]) {
      f[t] = v;
      rec(t + 1);
    }
  };
  rec(0);
  H.normalize();
  return H;
}

inline PartiteHypergraph bipartite_circulant(int n, const std::vector<int>& conn) {
  PartiteHypergraph H;
  H.d = 2;
  H.r = 2;
  H.n = 2 * n;
  H.tau.assign(2 * n, 0);
  for (int i = 0; i < n; ++i) H.tau[n + i] = 1;
  for (int i = 0; i < n; ++i)
    for (int s : conn) H.facets.push_back({i, n + (i + s) % n});
  H.normalize();
  return H;
}

// Latin square from the Z_n table composed with seeded row/column/symbol
// permutations; stays a Latin square, hence the complex is type-regular.
inline std::vector<std::vector<int>> latin_square(int n, SplitMix64& rng) {
  auto perm = [&](int m) {
    std::vector<int> p(m);
    for (int i = 0; i < m; ++i) p[i] = i;
    for (int i = m - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
    return p;
  };
  auto pr = perm(n), pc = perm(n), ps = perm(n);
  std::vector<std::vector<int>> L(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L[i][j] = ps[(pr[i] + pc[j]) % n];
  return L;
}

inline PartiteHypergraph latin_complex(const std::vector<std::vector<int>>& L) {
  int n = (int)L.size();
  PartiteHypergraph H;
  H.d = 3;
  H.r = 3;
  H.n = 3 * n;
  H.tau.assign(3 * n, 0);
  for (int i = 0; i < n; ++i) {
    H.tau[n + i] = 1;
    H.tau[2 * n + i] = 2;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H.facets.push_back({i, n + j, 2 * n + L[i][j]});
  H.normalize();
  return H;
}

// Union with the symbol-shifted square: facet sets are disjoint, every wall
// degree doubles uniformly.
inline PartiteHypergraph latin_union_complex(const std::vector<std::vector<int>>& L) {
  int n = (int)L.size();
  PartiteHypergraph H = latin_complex(L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      H.facets.push_back({i, n + j, 2 * n + (L[i][j] + 1) % n});
  H.normalize();
  return H;
}

// The mixing corpus: >= 50 type-regular instances, deterministically derived
// from the seed.
inline std::vector<Instance> mixing_corpus(std::uint64_t seed) {
  std::vector<Instance> out;
  SplitMix64 rng(seed);

  for (auto sizes : std::vector<std::vector<int>>{
           {2, 2}, {2, 3}, {3, 3}, {2, 4}, {4, 4}, {3, 4}, {5, 5}, {6, 6}})
    out.push_back({"complete-bipartite-" + std::to_string(sizes[0]) + "x" +
                       std::to_string(sizes[1]),
                   complete_multipartite(sizes)});

  for (auto sizes : std::vector<std::vector<int>>{
           {2, 2, 2}, {2, 2, 3}, {2, 3, 3}, {3, 3, 3}, {2, 2, 4}, {2, 4, 4}})
    out.push_back({"complete-3partite-" + std::to_string(sizes[0]) +
                       std::to_string(sizes[1]) + std::to_string(sizes[2]),
                   complete_multipartite(sizes)});

  for (int n : {3, 4, 5, 6})
    for (int t = 0; t < 6; ++t) {
      std::vector<int> conn;
      for (int s = 0; s < n; ++s)
        if (rng.coin()) conn.push_back(s);
      if (conn.empty()) conn.push_back((int)rng.below(n));
      out.push_back({"circulant-" + std::to_string(n) + "-v" + std::to_string(t),
                     bipartite_circulant(n, conn)});
    }

  for (int n : {3, 4})
    for (int t = 0; t < 8; ++t)
      out.push_back({"latin-" + std::to_string(n) + "-v" + std::to_string(t),
                     latin_complex(latin_square(n, rng))});

  for (int n : {3, 4})
    for (int t = 0; t < 4; ++t)
      out.push_back({"latin-union-" + std::to_string(n) + "-v" + std::to_string(t),
                     latin_union_complex(latin_square(n, rng))});

  for (auto& inst : out) inst.H.validate();
  return out;
}

// Extra instances for chromatic testing: non-partite complexes with known
// chromatic numbers.
inline std::vector<Instance> chromatic_extras() {
  std::vector<Instance> out;

  // single facet of dimension 2: two colors suffice and are needed
  {
    PartiteHypergraph H;
    H.d = 3;
    H.n = 3;
    H.facets = {{0, 1, 2}};
    H.normalize();
    out.push_back({"single-facet", H});
  }

  // complete graphs as 1-dimensional complexes: chromatic number n
  for (int n : {3, 4, 5}) {
    PartiteHypergraph H;
    H.d = 2;
    H.n = n;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) H.facets.push_back({i, j});
    H.normalize();
    out.push_back({"complete-" + std::to_string(n), H});
  }

  // odd cycles: chromatic number 3
  for (int n : {5, 7}) {
    PartiteHypergraph H;
    H.d = 2;
    H.n = n;
    for (int i = 0; i < n; ++i) H.facets.push_back({i, (i + 1) % n});
    H.normalize();
    out.push_back({"cycle-" + std::to_string(n), H});
  }
  return out;
}

}  // namespace rcx::corpus
