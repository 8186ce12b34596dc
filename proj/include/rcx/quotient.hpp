#pragma once

#include <fstream>

#include "rcx/cslattice.hpp"

namespace rcx::quotient {

using cslattice::CSAlgebraRep;
using cslattice::CSElement;
using cslattice::GeneratorSet;
using gf::code;
using gf::Embedding;
using gf::FieldSpec;
using gf::Poly;
using laurent::RatFun;

// Reduction data for the ideal (f): the residue field F_{q^e} together with
// the chosen root alpha of f, so that a coordinate in F_q(y) with
// denominator y^a (1+y)^b evaluates cleanly at y = alpha.
class CongruenceMap {
 public:
  const FieldSpec* Fq;
  const FieldSpec* Fqe;
  std::unique_ptr<Embedding> eps;  // F_q -> F_{q^e}
  Poly f;
  code alpha;
  int e;

  CongruenceMap(const FieldSpec& base, Poly f_) : Fq(&base), f(std::move(f_)) {
    e = f.degree();
    if (e < 2) throw parameter_error("CongruenceMap: deg f must be >= 2");
    if (f.coeff(0) == 0)
      throw parameter_error("CongruenceMap: f(0) = 0 (y divides f)");
    if (f.eval(Fq->neg(1)) == 0)
      throw parameter_error("CongruenceMap: f(-1) = 0 (1+y divides f)");
    if (!gf::is_irreducible(f))
      throw parameter_error("CongruenceMap: f is not irreducible");
    Fqe = &gf::build_field(Fq->p, Fq->k * e);
    eps = std::make_unique<Embedding>(*Fq, *Fqe);
    alpha = 0;
    bool found = false;
    for (code x = 0; x < Fqe->size && !found; ++x)
      if (f.eval_embedded(*eps, x) == 0) { alpha = x; found = true; }
    if (!found) throw consistency_error("CongruenceMap: no root in F_{q^e}");
  }

  code eval(const RatFun& r) const { return r.eval(*eps, alpha); }
};

// Order of the class of y/(1+y) = alpha/(1+alpha) in F_{q^e}^* modulo d-th
// powers: the least r | d with (alpha/(1+alpha))^r a d-th power.
inline int partite_index(const CongruenceMap& cmap, int d) {
  const FieldSpec& F = *cmap.Fqe;
  code t = F.div(cmap.alpha, F.add(1, cmap.alpha));
  for (int r = 1; r <= d; ++r) {
    if (d % r != 0) continue;
    if (F.is_dth_power(F.pow(t, r), d)) return r;
  }
  throw consistency_error("partite_index: no divisor matched");
}

// Find a congruence polynomial of degree e realizing the requested partite
// index.  For r = 1 the beta-parametrization is scanned in code order:
// alpha = beta^d / (1 - beta^d) makes y/(1+y) a d-th power by construction.
// For other r, monic irreducible polynomials are scanned in code order.
inline CongruenceMap search_polynomial(const FieldSpec& Fq, int d, int e,
                                       int target_r) {
  if (e < 2) throw parameter_error("search_polynomial: e must be >= 2");
  if (target_r < 1 || d % target_r != 0)
    throw parameter_error("search_polynomial: target index must divide d");
  const FieldSpec& Fqe = gf::build_field(Fq.p, Fq.k * e);
  Embedding eps(Fq, Fqe);

  if (target_r == 1) {
    for (code beta = 1; beta < Fqe.size; ++beta) {
      code bd = Fqe.pow(beta, d);
      if (bd == 1) continue;
      code alpha = Fqe.div(bd, Fqe.sub(1, bd));
      Poly f = gf::minimal_polynomial(alpha, eps);
      if (f.degree() != e) continue;  // alpha must generate the field
      if (f.coeff(0) == 0 || f.eval(Fq.neg(1)) == 0) continue;
      CongruenceMap cmap(Fq, f);
      if (partite_index(cmap, d) != 1)
        throw consistency_error("search_polynomial: beta search gave index != 1");
      return cmap;
    }
    throw math_error("search_polynomial: no admissible beta at this (q,d,e)");
  }

  long long count = 1;
  for (int i = 0; i < e; ++i) count *= Fq.size;
  for (long long mcode = 0; mcode < count; ++mcode) {
    Poly f(Fq);
    f.c.assign(e + 1, 0);
    long long mm = mcode;
    for (int i = 0; i < e; ++i) { f.c[i] = code(mm % Fq.size); mm /= Fq.size; }
    f.c[e] = 1;
    if (f.coeff(0) == 0 || f.eval(Fq.neg(1)) == 0) continue;
    if (!gf::is_irreducible(f)) continue;
    CongruenceMap cmap(Fq, f);
    if (partite_index(cmap, d) == target_r) return cmap;
  }
  throw math_error("search_polynomial: no irreducible f of degree " +
                   std::to_string(e) + " realizes index " +
                   std::to_string(target_r));
}

// Element of the reduced algebra A(F_{q^e}): d^2 coordinates, canonicalized
// so the first nonzero coordinate is 1 (projective class representative).
using Coords = std::vector<code>;

struct ReducedAlgebra {
  const CSAlgebraRep* rep;
  const CongruenceMap* cmap;
  int d;
  std::vector<code> tensor;  // [i][j][s] embedded into F_{q^e}
  code one_plus_alpha;
  Coords identity;

  ReducedAlgebra(const CSAlgebraRep& R, const CongruenceMap& cm)
      : rep(&R), cmap(&cm), d(R.d) {
    tensor.assign((size_t)d * d * d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int s = 0; s < d; ++s)
          tensor[((size_t)i * d + j) * d + s] =
              cm.eps->map(R.mult_tensor[i][j][s]);
    one_plus_alpha = cm.Fqe->add(1, cm.alpha);
    identity = canonical(reduce(CSElement::identity(R)));
  }

  // Evaluate the projective class at y = alpha.  The canonical scaling may
  // have moved the coordinates outside R, so denominators are cleared to a
  // polynomial vector first, and common powers of f are stripped: f is the
  // minimal polynomial of alpha, so the remaining scalar cannot vanish.
  Coords reduce(const CSElement& x) const {
    const FieldSpec& base = *cmap->Fq;
    Poly D = Poly::constant(base, 1);
    for (const auto& co : x.l)
      if (!co.is_zero()) D = D * co.den;
    std::vector<Poly> nums(x.l.size(), Poly(base));
    for (size_t i = 0; i < x.l.size(); ++i)
      if (!x.l[i].is_zero()) nums[i] = x.l[i].num * (D / x.l[i].den);
    for (;;) {
      bool all_div = false;
      for (const auto& n : nums)
        if (!n.is_zero()) {
          all_div = true;
          break;
        }
      if (!all_div) throw math_error("ReducedAlgebra::reduce: zero element");
      for (const auto& n : nums)
        if (!n.is_zero() && !(n % cmap->f).is_zero()) { all_div = false; break; }
      if (!all_div) break;
      for (auto& n : nums)
        if (!n.is_zero()) n = n / cmap->f;
    }
    Coords out((size_t)d * d);
    for (int i = 0; i < d * d; ++i)
      out[i] = nums[i].eval_embedded(*cmap->eps, cmap->alpha);
    return out;
  }

  Coords canonical(Coords v) const {
    const FieldSpec& F = *cmap->Fqe;
    for (code& x : v)
      if (x) {
        code s = F.inv(x);
        if (s != 1)
          for (code& y : v) y = F.mul(y, s);
        break;
      }
    return v;
  }

  bool is_zero(const Coords& v) const {
    for (code x : v)
      if (x) return false;
    return true;
  }

  Coords mul(const Coords& a, const Coords& b) const {
    const FieldSpec& F = *cmap->Fqe;
    Coords out((size_t)d * d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        code av = a[i * d + j];
        if (!av) continue;
        for (int i2 = 0; i2 < d; ++i2)
          for (int j2 = 0; j2 < d; ++j2) {
            code bv = b[i2 * d + j2];
            if (!bv) continue;
            code prod = F.mul(av, bv);
            int jj = j + j2;
            if (jj >= d) {
              jj -= d;
              prod = F.mul(prod, one_plus_alpha);
            }
            const code* col = &tensor[((size_t)i * d + (i2 + j) % d) * d];
            for (int s = 0; s < d; ++s)
              if (col[s])
                out[s * d + jj] = F.add(out[s * d + jj], F.mul(prod, col[s]));
          }
      }
    return out;
  }

  std::uint64_t pack(const Coords& v) const {
    int bits = 1;
    while ((1u << bits) < cmap->Fqe->size) ++bits;
    if (bits * d * d > 64)
      throw parameter_error("ReducedAlgebra: field too large to pack keys");
    std::uint64_t k = 0;
    for (code x : v) k = (k << bits) | x;
    return k;
  }
};

// Finite quotient group: canonical projective coordinate matrices over
// F_{q^e}, hash-indexed, with generator adjacency and type labels mod r.
struct GroupTable {
  int d;
  long long q;
  int e;
  int r;                          // partite index
  unsigned long long order;
  int num_gens;
  std::vector<int> gen_types;
  std::vector<code> elems;        // order * d * d canonical coordinates
  std::vector<std::uint32_t> adj; // order * num_gens
  std::vector<int> type_of;      // labels mod r (all 0 when r == 1)
  std::uint32_t identity;
  const FieldSpec* Fqe;

  const code* elem(std::uint32_t i) const { return &elems[(size_t)i * d * d]; }
  std::uint32_t neighbor(std::uint32_t i, int g) const {
    return adj[(size_t)i * num_gens + g];
  }
};

// BFS closure of the reduced generators from the identity.  Verifies that
// the type discrepancies around closed walks generate exactly the subgroup
// r Z/dZ and that the order matches |PSL_d(q^e)| * r.
inline GroupTable generate_group(const CSAlgebraRep& R, const GeneratorSet& gs,
                                 const CongruenceMap& cmap,
                                 long long budget = 2000000) {
  ReducedAlgebra A(R, cmap);
  int d = R.d;
  auto gens = gs.flat();
  int ng = (int)gens.size();

  std::vector<Coords> rgens;
  std::vector<int> gtypes;
  for (const auto* g : gens) {
    rgens.push_back(A.canonical(A.reduce(g->elem)));
    gtypes.push_back(g->type);
    if (A.is_zero(rgens.back()))
      throw consistency_error("generate_group: generator reduces to zero");
  }

  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::vector<Coords> elems = {A.identity};
  std::vector<int> label = {0};  // type labels mod d along the BFS tree
  index.emplace(A.pack(A.identity), 0);
  std::vector<std::uint32_t> adj;
  adj.reserve(1024);
  long long discrepancy_gcd = d;

  std::deque<std::uint32_t> queue = {0};
  while (!queue.empty()) {
    std::uint32_t vi = queue.front();
    queue.pop_front();
    if ((size_t)vi * ng >= adj.size()) adj.resize((size_t)(vi + 1) * ng, 0);
    for (int g = 0; g < ng; ++g) {
      Coords w = A.canonical(A.mul(elems[vi], rgens[g]));
      std::uint64_t k = A.pack(w);
      auto it = index.find(k);
      std::uint32_t ni;
      if (it == index.end()) {
        if ((long long)elems.size() >= budget)
          throw budget_error("generate_group: budget exceeded at " +
                             std::to_string(elems.size()) + " elements");
        ni = (std::uint32_t)elems.size();
        index.emplace(k, ni);
        elems.push_back(std::move(w));
        label.push_back((label[vi] + gtypes[g]) % d);
        queue.push_back(ni);
      } else {
        ni = it->second;
        int delta = ((label[vi] + gtypes[g] - label[ni]) % d + d) % d;
        if (delta) discrepancy_gcd = std::gcd(discrepancy_gcd, (long long)delta);
      }
      adj[(size_t)vi * ng + g] = ni;
    }
  }

  int r = partite_index(cmap, d);
  if (discrepancy_gcd != r)
    throw consistency_error(
        "generate_group: realized type subgroup gcd = " +
        std::to_string(discrepancy_gcd) + ", partite index = " + std::to_string(r));

  long long qe = 1;
  for (int i = 0; i < cmap.e; ++i) qe *= R.q;
  unsigned long long expect = psl_order(d, qe) * (unsigned long long)r;
  if ((unsigned long long)elems.size() != expect)
    throw consistency_error("generate_group: order " +
                            std::to_string(elems.size()) + " != expected " +
                            std::to_string(expect));

  // canonical post-pass: sort by packed key so indices are reproducible
  std::uint32_t n = (std::uint32_t)elems.size();
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::uint64_t> keys(n);
  for (std::uint32_t i = 0; i < n; ++i) keys[i] = A.pack(elems[i]);
  std::sort(perm.begin(), perm.end(),
            [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
  std::vector<std::uint32_t> where(n);
  for (std::uint32_t pos = 0; pos < n; ++pos) where[perm[pos]] = pos;

  GroupTable t;
  t.d = d;
  t.q = R.q;
  t.e = cmap.e;
  t.r = r;
  t.order = n;
  t.num_gens = ng;
  t.gen_types = gtypes;
  t.Fqe = cmap.Fqe;
  t.elems.resize((size_t)n * d * d);
  t.adj.resize((size_t)n * ng);
  t.type_of.resize(n);
  for (std::uint32_t pos = 0; pos < n; ++pos) {
    std::uint32_t old = perm[pos];
    std::copy(elems[old].begin(), elems[old].end(),
              t.elems.begin() + (size_t)pos * d * d);
    t.type_of[pos] = label[old] % r;
    for (int g = 0; g < ng; ++g)
      t.adj[(size_t)pos * ng + g] = where[adj[(size_t)old * ng + g]];
  }
  t.identity = where[0];
  return t;
}

// Type-restoring d-fold cover of a non-partite quotient: elements are
// (g, t) with t in Z/dZ and (g, t) sigma_i = (g sigma_i, t + i).
struct CoverTable {
  int d;
  unsigned long long order;        // d * base order
  int num_gens;
  std::vector<int> gen_types;
  std::vector<std::uint32_t> adj;  // order * num_gens
  std::vector<int> type_of;        // t component: a genuine d-type function
  std::uint32_t identity;
};

inline CoverTable cover_group(const GroupTable& base) {
  if (base.r != 1)
    throw parameter_error(
        "cover_group: base must be non-partite (r = 1); the cover construction "
        "requires the full type group to collapse in the base");
  CoverTable c;
  c.d = base.d;
  c.order = base.order * base.d;
  c.num_gens = base.num_gens;
  c.gen_types = base.gen_types;
  c.adj.resize((size_t)c.order * c.num_gens);
  c.type_of.resize(c.order);
  for (std::uint64_t gi = 0; gi < base.order; ++gi)
    for (int t = 0; t < base.d; ++t) {
      std::uint64_t v = gi * base.d + t;
      c.type_of[v] = t;
      for (int g = 0; g < c.num_gens; ++g) {
        std::uint64_t wg = base.adj[(size_t)gi * base.num_gens + g];
        int wt = (t + base.gen_types[g]) % base.d;
        c.adj[(size_t)v * c.num_gens + g] = (std::uint32_t)(wg * base.d + wt);
      }
    }
  c.identity = base.identity * base.d;
  return c;
}

inline std::string coords_str(const GroupTable& t, std::uint32_t i) {
  std::string s;
  const code* e = t.elem(i);
  for (int k = 0; k < t.d * t.d; ++k) {
    if (k) s += ';';
    s += std::to_string(e[k]);
  }
  return s;
}

// Text export: header "d q e r order", then one element per line
// (index, canonical coordinate matrix, type label).
inline void write_group(const GroupTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parameter_error("write_group: cannot open " + path);
  os << t.d << ' ' << t.q << ' ' << t.e << ' ' << t.r << ' ' << t.order << "\n";
  for (std::uint32_t i = 0; i < t.order; ++i)
    os << i << ' ' << coords_str(t, i) << ' ' << t.type_of[i] << "\n";
}

// Edge list with the generator type in the third column.
inline void write_edges(const GroupTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parameter_error("write_edges: cannot open " + path);
  for (std::uint32_t i = 0; i < t.order; ++i)
    for (int g = 0; g < t.num_gens; ++g) {
      std::uint32_t j = t.neighbor(i, g);
      if (i <= j) os << i << ' ' << j << ' ' << t.gen_types[g] << "\n";
    }
}

}  // namespace rcx::quotient
