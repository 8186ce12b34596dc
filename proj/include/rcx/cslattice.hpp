#pragma once

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "rcx/laurent.hpp"
#include "rcx/series.hpp"

namespace rcx::cslattice {

using gf::code;
using gf::Embedding;
using gf::FieldSpec;
using gf::Poly;
using gf::SubfieldCoords;
using laurent::expand;
using laurent::LaurentSeries;
using laurent::need_precision;
using laurent::RatFun;
using laurent::RelPosition;
using laurent::SeriesMatrix;

// The lattice is presented inside the cyclic algebra
//   A = (+)_{i,j} F_q(y) xi_i z^j,   z^d = 1+y,   z xi = phi(xi) z,
// with xi_0,...,xi_{d-1} a normal basis of F_{q^d} over F_q and phi the
// q-power Frobenius.  A is a division algebra over F_q(y) (1+y is not a
// global norm), so lattice elements admit no d x d model with rational
// entries; they are kept as exact coordinate arrays in the xi_i z^j basis.
// Over the completion F_q((y)) the algebra splits: z acts as M(c) * P with
// P the basis rotation and c a unit power series with norm 1+y.  c exists
// only as a series, so the splitting is evaluated on a precision window
// that grows until every requested valuation is certified.
class CSAlgebraRep {
 public:
  int d;
  long long q;
  int p, m;  // q = p^m
  const FieldSpec* Fq;
  const FieldSpec* L;  // F_{q^d}
  std::unique_ptr<Embedding> eps;           // F_q -> L
  std::unique_ptr<SubfieldCoords> xcoords;  // coordinates over the xi basis
  std::vector<code> xi;                     // xi[i] = xi_0^{q^i}
  std::vector<code> one_coords;             // coordinates of 1 in the xi basis
  // mult_tensor[i][j][s]: coefficient of xi_s in xi_i * xi_j (an F_q code)
  std::vector<std::vector<std::vector<code>>> mult_tensor;
  RatFun one_plus_y;

  CSAlgebraRep(int d_, long long q_) : d(d_), q(q_) {
    if (d < 2) throw parameter_error("CSAlgebraRep: d must be >= 2");
    factor_prime_power();
    if (p == 2) throw parameter_error("CSAlgebraRep: q must be odd");
    Fq = &gf::build_field(p, m);
    L = &gf::build_field(p, m * d);
    eps = std::make_unique<Embedding>(*Fq, *L);
    code xi0 = gf::find_normal_element(*L, *eps);
    xi.resize(d);
    xi[0] = xi0;
    for (int i = 1; i < d; ++i) xi[i] = L->pow(xi[i - 1], q);
    xcoords = std::make_unique<SubfieldCoords>(*eps, xi);
    one_coords = xcoords->coords(1);
    mult_tensor.assign(d, std::vector<std::vector<code>>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        mult_tensor[i][j] = xcoords->coords(L->mul(xi[i], xi[j]));
    one_plus_y = RatFun::parse(*Fq, "1,1");
    ensure_precision(32);
  }

  code trace_of(code x) const {
    code t = 0, cur = x;
    for (int i = 0; i < d; ++i) {
      t = L->add(t, cur);
      cur = L->pow(cur, q);
    }
    return t;
  }

  long long precision() const { return cprec_; }

  // Extend the series window: solve N(c) = 1 + y one coefficient at a time
  // against the trace form, then rebuild the splitting's basis matrices.
  // Serialized so concurrent position queries may share one rep.
  void ensure_precision(long long T) {
    std::lock_guard<std::mutex> lock(mu_);
    if (T <= cprec_) return;
    if (T > kMaxPrecision)
      throw math_error("CSAlgebraRep: precision cap exceeded (singular input?)");
    solve_norm_series(T);
    build_basis_matrices(T);
    cprec_ = T;
  }

  // sigma_c(xi_i z^j) at the current precision
  const SeriesMatrix& basis_matrix(int i, int j) const { return bas_[i * d + j]; }

  static constexpr long long kMaxPrecision = 1 << 14;

 private:
  mutable std::mutex mu_;
  long long cprec_ = 0;
  std::vector<code> cser_;  // c = sum cser_[n] y^n, coefficients in L
  std::vector<SeriesMatrix> bas_;

  void factor_prime_power() {
    if (q < 3) throw parameter_error("CSAlgebraRep: q must be an odd prime power");
    long long qq = q;
    p = 0;
    for (long long f = 2; f * f <= qq; ++f)
      if (qq % f == 0) { p = (int)f; break; }
    if (p == 0) p = (int)qq;
    m = 0;
    while (qq > 1) {
      if (qq % p != 0) throw parameter_error("CSAlgebraRep: q is not a prime power");
      qq /= p;
      ++m;
    }
  }

  // Coefficients 0..len-1 of prod_t phi^t(partial c).
  std::vector<code> norm_series(const std::vector<code>& cs, long long len) const {
    std::vector<code> acc(len, 0);
    acc[0] = 1;
    for (int t = 0; t < d; ++t) {
      std::vector<code> conj(cs.size());
      for (size_t n = 0; n < cs.size(); ++n)
        conj[n] = L->frobenius_power(cs[n], m * t);
      std::vector<code> nxt(len, 0);
      for (long long a = 0; a < (long long)std::min<size_t>(len, conj.size()); ++a) {
        if (!conj[a]) continue;
        for (long long b = 0; a + b < len; ++b)
          if (acc[b]) nxt[a + b] = L->add(nxt[a + b], L->mul(conj[a], acc[b]));
      }
      acc = std::move(nxt);
    }
    return acc;
  }

  void solve_norm_series(long long T) {
    std::vector<code> cs = cser_;
    if (cs.empty()) cs = {1};
    code trx = trace_of(xi[0]);  // nonzero: the orbit sums over a basis
    code corr = L->mul(xi[0], L->inv(trx));
    for (long long n = (long long)cs.size(); n <= T; ++n) {
      std::vector<code> nc = norm_series(cs, n + 1);
      code want = (n == 1) ? 1 : 0;
      code delta = L->sub(want, nc[n]);
      cs.push_back(delta ? L->mul(delta, corr) : 0);
    }
    cser_ = std::move(cs);
    std::vector<code> nc = norm_series(cser_, T + 1);
    for (long long n = 0; n <= T; ++n)
      if (nc[n] != (n <= 1 ? 1u : 0u))
        throw consistency_error("CSAlgebraRep: norm series does not match 1+y");
  }

  void build_basis_matrices(long long T) {
    // c_{(j)} = c phi(c) ... phi^{j-1}(c)
    std::vector<std::vector<code>> cj(d);
    cj[0] = {1};
    std::vector<code> acc = {1};
    for (int j = 1; j < d; ++j) {
      std::vector<code> conj(cser_.size());
      for (size_t n = 0; n < cser_.size(); ++n)
        conj[n] = L->frobenius_power(cser_[n], m * (j - 1));
      std::vector<code> nxt(T + 1, 0);
      for (size_t a = 0; a < acc.size() && a <= (size_t)T; ++a) {
        if (!acc[a]) continue;
        for (size_t b = 0; b < conj.size() && a + b <= (size_t)T; ++b)
          if (conj[b]) nxt[a + b] = L->add(nxt[a + b], L->mul(acc[a], conj[b]));
      }
      acc = nxt;
      cj[j] = acc;
    }
    bas_.assign(d * d, SeriesMatrix());
    for (int j = 0; j < d; ++j) {
      // columns of M(c_{(j)}) per series order: cols[n][a][s], coefficient
      // of xi_s in (cj[j]_n * xi_a)
      std::vector<std::vector<std::vector<code>>> cols(cj[j].size());
      for (size_t n = 0; n < cj[j].size(); ++n) {
        cols[n].resize(d);
        for (int a = 0; a < d; ++a)
          cols[n][a] = cj[j][n] ? xcoords->coords(L->mul(cj[j][n], xi[a]))
                                : std::vector<code>(d, 0);
      }
      for (int i = 0; i < d; ++i) {
        SeriesMatrix sm(*Fq, d, T);
        for (int r = 0; r < d; ++r)
          for (int b = 0; b < d; ++b) {
            int a = (b + j) % d;  // column picked by the rotation P^j
            std::vector<code> coef(T, 0);
            for (size_t n = 0; n < cols.size() && n < (size_t)T; ++n) {
              code v = 0;
              for (int s = 0; s < d; ++s)
                if (cols[n][a][s] && mult_tensor[i][s][r])
                  v = Fq->add(v, Fq->mul(mult_tensor[i][s][r], cols[n][a][s]));
              coef[n] = v;
            }
            sm.at(r, b) = LaurentSeries(*Fq, 0, T, std::move(coef));
          }
        bas_[i * d + j] = std::move(sm);
      }
    }
  }
};

// Algebra element: exact rational coordinates l[i*d+j] of xi_i z^j.
class CSElement {
 public:
  const CSAlgebraRep* rep = nullptr;
  std::vector<RatFun> l;

  CSElement() = default;
  explicit CSElement(const CSAlgebraRep& r)
      : rep(&r), l(r.d * r.d, RatFun(*r.Fq)) {}

  static CSElement identity(const CSAlgebraRep& r) {
    CSElement e(r);
    for (int i = 0; i < r.d; ++i)
      e.l[i * r.d] = RatFun::constant(*r.Fq, r.one_coords[i]);
    return e;
  }

  // x * z^j for x in F_{q^d}, scaled by a rational function
  static CSElement monomial(const CSAlgebraRep& r, code x, int j, const RatFun& s) {
    CSElement e(r);
    auto co = r.xcoords->coords(x);
    for (int i = 0; i < r.d; ++i)
      if (co[i]) e.l[i * r.d + j] = RatFun::constant(*r.Fq, co[i]) * s;
    return e;
  }

  static CSElement z(const CSAlgebraRep& r) {
    return monomial(r, 1, 1, RatFun::constant(*r.Fq, 1));
  }

  bool is_zero() const {
    for (const auto& x : l)
      if (!x.is_zero()) return false;
    return true;
  }

  CSElement operator+(const CSElement& o) const {
    CSElement r = *this;
    for (size_t i = 0; i < l.size(); ++i) r.l[i] = r.l[i] + o.l[i];
    return r;
  }

  CSElement operator-(const CSElement& o) const {
    CSElement r = *this;
    for (size_t i = 0; i < l.size(); ++i) r.l[i] = r.l[i] - o.l[i];
    return r;
  }

  CSElement operator*(const CSElement& o) const {
    const CSAlgebraRep& R = *rep;
    int d = R.d;
    CSElement out(R);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const RatFun& a = l[i * d + j];
        if (a.is_zero()) continue;
        for (int i2 = 0; i2 < d; ++i2)
          for (int j2 = 0; j2 < d; ++j2) {
            const RatFun& b = o.l[i2 * d + j2];
            if (b.is_zero()) continue;
            RatFun prod = a * b;
            int jj = j + j2;
            if (jj >= d) {
              jj -= d;
              prod = prod * R.one_plus_y;
            }
            // xi_i * phi^j(xi_{i2}) = xi_i * xi_{(i2+j) mod d}
            const auto& col = R.mult_tensor[i][(i2 + j) % d];
            for (int s = 0; s < d; ++s)
              if (col[s])
                out.l[s * d + jj] =
                    out.l[s * d + jj] + prod * RatFun::constant(*R.Fq, col[s]);
          }
      }
    return out;
  }

  CSElement scaled(const RatFun& s) const {
    CSElement r = *this;
    for (auto& x : r.l) x = x * s;
    return r;
  }

  // Canonical representative of the projective class: divide by the first
  // nonzero coordinate.  Classes are equal iff canonical forms are equal.
  CSElement canonical() const {
    for (const auto& x : l)
      if (!x.is_zero()) return scaled(x.inv());
    throw math_error("CSElement::canonical: zero element");
  }

  bool operator==(const CSElement& o) const { return l == o.l; }

  std::string key() const {
    std::string s;
    for (const auto& x : l) {
      s += x.str();
      s += '|';
    }
    return s;
  }

  // The d x d splitting over F_q((y)) on the window [.., T).
  SeriesMatrix split_matrix(long long T) const {
    const CSAlgebraRep& R = *rep;
    const_cast<CSAlgebraRep&>(R).ensure_precision(T);
    int d = R.d;
    SeriesMatrix acc(*R.Fq, d, T + 64);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const RatFun& co = l[i * d + j];
        if (co.is_zero()) continue;
        LaurentSeries s = expand(co, T);
        const SeriesMatrix& B = R.basis_matrix(i, j);
        for (int r = 0; r < d; ++r)
          for (int cidx = 0; cidx < d; ++cidx)
            acc.at(r, cidx) = acc.at(r, cidx).add(s.mul(B.at(r, cidx)));
      }
    return acc;
  }
};

// Cartan invariant of the ordered pair (x_0, g x_0).  Retries at doubled
// precision until every pivot valuation is certified.
inline RelPosition rel_position_identity(const CSElement& g) {
  if (!g.rep) throw parameter_error("rel_position_identity: empty element");
  for (long long T = std::max<long long>(g.rep->precision(), 32);
       T <= CSAlgebraRep::kMaxPrecision; T *= 2) {
    try {
      return laurent::invariant_valuations(g.split_matrix(T));
    } catch (const need_precision&) {
      continue;
    }
  }
  throw math_error("rel_position_identity: precision cap reached (singular?)");
}

struct Generator {
  CSElement elem;         // canonical form
  CSElement inverse;      // canonical form of the inverse
  int type;               // moves the standard vertex to a type-`type` neighbor
  std::vector<int> word;  // indices into Sigma_1 realizing it
};

struct GeneratorSet {
  int d;
  long long q;
  std::vector<std::vector<Generator>> sigma;  // sigma[i], i = 1..d-1; [0] unused

  std::vector<const Generator*> flat() const {
    std::vector<const Generator*> out;
    for (int i = 1; i < d; ++i)
      for (const auto& g : sigma[i]) out.push_back(&g);
    return out;
  }
  long long total() const {
    long long t = 0;
    for (int i = 1; i < d; ++i) t += (long long)sigma[i].size();
    return t;
  }
};

// b = 1 - z^{-1} conjugated by a coset representative u of F_{q^d}^*/F_q^*:
//   b_u     = 1 - u^{1-q^{d-1}} z^{d-1} / (1+y)
//   b_u^{-1} = (1+y)/y + (1/y) sum_{t=1}^{d-1} u^{1-q^t} z^t
// (the inverse comes from the telescoping (1-x)(1+x+...+x^{d-1}) = 1-x^d
// with x = z^{-1} and z^{-d} = 1/(1+y)).
inline std::pair<CSElement, CSElement> make_bu(const CSAlgebraRep& R, code u) {
  const FieldSpec& Fq = *R.Fq;
  int d = R.d;
  RatFun one = RatFun::constant(Fq, 1);
  RatFun y = RatFun::variable(Fq);
  RatFun onep = R.one_plus_y;

  auto twist = [&](int t) {  // u^{1-q^t}
    long long qt = 1;
    for (int s = 0; s < t; ++s) qt *= R.q;
    return R.L->mul(u, R.L->inv(R.L->pow(u, qt)));
  };

  CSElement b =
      CSElement::identity(R) - CSElement::monomial(R, twist(d - 1), d - 1, one / onep);
  CSElement binv = CSElement::identity(R).scaled(onep / y);
  for (int t = 1; t < d; ++t)
    binv = binv + CSElement::monomial(R, twist(t), t, one / y);
  return {b.canonical(), binv.canonical()};
}

inline std::vector<std::pair<CSElement, CSElement>> build_sigma1(const CSAlgebraRep& R) {
  long long reps = ((long long)R.L->size - 1) / (R.q - 1);
  std::vector<std::pair<CSElement, CSElement>> out;
  std::unordered_map<std::string, int> seen;
  code g = R.L->generator;
  code u = 1;
  for (long long t = 0; t < reps; ++t) {
    auto bu = make_bu(R, u);
    std::string k = bu.first.key();
    if (seen.count(k))
      throw consistency_error("build_sigma1: coset representatives collide");
    seen[k] = (int)out.size();
    out.push_back(std::move(bu));
    u = R.L->mul(u, g);
  }
  return out;
}

namespace detail {

inline std::vector<long long> neighbor_pattern(int d, int i) {
  std::vector<long long> v(d, 0);
  for (int t = d - i; t < d; ++t) v[t] = 1;
  return v;
}

}  // namespace detail

// Sigma_i: for i up to ceil((d-1)/2), products of i Sigma_1 elements filtered
// by relative position (0,..,0,1,..,1); for larger i, the inverses of
// Sigma_{d-i} (inversion swaps type i and d-i neighbors of the standard
// vertex), with words recovered by peeling one generator at a time.
// Cardinalities are checked against the subspace counts [d i]_q.
inline GeneratorSet enumerate_sigma(const CSAlgebraRep& R) {
  int d = R.d;
  GeneratorSet gs;
  gs.d = d;
  gs.q = R.q;
  gs.sigma.assign(std::max(d, 2), {});

  auto sigma1 = build_sigma1(R);
  if ((long long)sigma1.size() != gaussian_binomial(d, 1, R.q))
    throw consistency_error("enumerate_sigma: |Sigma_1| != [d 1]_q");

  for (size_t t = 0; t < sigma1.size(); ++t) {
    Generator g;
    g.elem = sigma1[t].first;
    g.inverse = sigma1[t].second;
    g.type = 1;
    g.word = {(int)t};
    auto rp = rel_position_identity(g.elem);
    if (rp.normalized != detail::neighbor_pattern(d, 1))
      throw consistency_error("enumerate_sigma: Sigma_1 relative position wrong");
    gs.sigma[1].push_back(std::move(g));
  }

  int mid = d / 2;  // ceil((d-1)/2)
  // layered products with first-found words
  std::vector<std::unordered_map<std::string, std::pair<CSElement, std::vector<int>>>>
      layers(mid + 1);
  for (size_t t = 0; t < sigma1.size(); ++t)
    layers[1].emplace(sigma1[t].first.key(),
                      std::make_pair(sigma1[t].first, std::vector<int>{(int)t}));
  for (int len = 2; len <= mid; ++len)
    for (const auto& [k, v] : layers[len - 1])
      for (size_t t = 0; t < sigma1.size(); ++t) {
        CSElement prod = (v.first * sigma1[t].first).canonical();
        std::string kk = prod.key();
        if (layers[len].count(kk)) continue;
        auto word = v.second;
        word.push_back((int)t);
        layers[len].emplace(kk, std::make_pair(std::move(prod), std::move(word)));
      }

  for (int i = 2; i <= mid && i <= d - 1; ++i) {
    auto pattern = detail::neighbor_pattern(d, i);
    for (const auto& [k, v] : layers[i]) {
      auto rp = rel_position_identity(v.first);
      if (rp.normalized != pattern) continue;
      Generator g;
      g.elem = v.first;
      g.word = v.second;
      g.type = i;
      CSElement inv = sigma1[g.word.back()].second;
      for (int t = (int)g.word.size() - 2; t >= 0; --t)
        inv = inv * sigma1[g.word[t]].second;
      g.inverse = inv.canonical();
      gs.sigma[i].push_back(std::move(g));
    }
    std::sort(gs.sigma[i].begin(), gs.sigma[i].end(),
              [](const Generator& a, const Generator& b) {
                return a.elem.key() < b.elem.key();
              });
  }

  for (int i = mid + 1; i <= d - 1; ++i) {
    int src = d - i;  // src <= mid, already built
    auto pattern = detail::neighbor_pattern(d, i);
    std::unordered_map<std::string, const Generator*> prev;
    for (const auto& g : gs.sigma[i - 1]) prev.emplace(g.elem.key(), &g);
    for (const Generator& s : gs.sigma[src]) {
      Generator g;
      g.elem = s.inverse;
      g.inverse = s.elem;
      g.type = i;
      auto rp = rel_position_identity(g.elem);
      if (rp.normalized != pattern)
        throw consistency_error("enumerate_sigma: inverse relative position wrong");
      bool found = false;
      for (size_t t = 0; t < sigma1.size() && !found; ++t) {
        CSElement peeled = (g.elem * sigma1[t].second).canonical();
        auto it = prev.find(peeled.key());
        if (it != prev.end()) {
          g.word = it->second->word;
          g.word.push_back((int)t);
          found = true;
        }
      }
      if (!found)
        throw consistency_error("enumerate_sigma: no word found by peeling");
      gs.sigma[i].push_back(std::move(g));
    }
    std::sort(gs.sigma[i].begin(), gs.sigma[i].end(),
              [](const Generator& a, const Generator& b) {
                return a.elem.key() < b.elem.key();
              });
  }

  for (int i = 1; i < d; ++i) {
    long long expect = gaussian_binomial(d, i, R.q);
    if ((long long)gs.sigma[i].size() != expect)
      throw consistency_error("enumerate_sigma: |Sigma_" + std::to_string(i) +
                              "| = " + std::to_string(gs.sigma[i].size()) +
                              ", expected " + std::to_string(expect));
  }
  return gs;
}

struct BallVertex {
  CSElement elem;   // canonical word product from the identity
  int depth;
  RelPosition pos;  // relative to the center
  int type;         // accumulated generator type mod d
};

struct BuildingBall {
  int d;
  long long q;
  int radius;
  std::vector<BallVertex> vertices;  // [0] is the center
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, generator type)
  std::vector<std::vector<int>> facets;               // d-cliques, sorted tuples
  std::vector<long long> layer_sizes;

  long long size() const { return (long long)vertices.size(); }
};

// BFS over right multiplication by Sigma from the identity, deduplicating by
// projective canonical form.  Facets are the d-cliques of the 1-skeleton.
inline BuildingBall building_ball(const CSAlgebraRep& R, const GeneratorSet& gs,
                                  int radius, long long max_vertices = 2000000) {
  BuildingBall ball;
  ball.d = R.d;
  ball.q = R.q;
  ball.radius = radius;
  auto gens = gs.flat();

  std::unordered_map<std::string, int> index;
  CSElement id = CSElement::identity(R).canonical();
  index.emplace(id.key(), 0);
  {
    BallVertex v;
    v.elem = id;
    v.depth = 0;
    v.pos = RelPosition::from_raw(std::vector<long long>(R.d, 0));
    v.type = 0;
    ball.vertices.push_back(std::move(v));
  }
  std::set<std::pair<int, int>> edges;  // directed, with generator types
  std::vector<std::vector<std::pair<int, int>>> out_edges(1);
  std::deque<int> frontier = {0};
  ball.layer_sizes = {1};

  for (int depth = 0; depth < radius; ++depth) {
    std::deque<int> next;
    for (int vi : frontier) {
      for (const Generator* g : gens) {
        CSElement w = (ball.vertices[vi].elem * g->elem).canonical();
        std::string k = w.key();
        auto it = index.find(k);
        int ni;
        if (it == index.end()) {
          if ((long long)ball.vertices.size() >= max_vertices)
            throw budget_error("building_ball: vertex budget exceeded at " +
                               std::to_string(ball.vertices.size()) + " vertices");
          ni = (int)ball.vertices.size();
          index.emplace(k, ni);
          BallVertex v;
          v.elem = w;
          v.depth = depth + 1;
          v.pos = rel_position_identity(w);
          v.type = int((ball.vertices[vi].type + g->type) % R.d);
          if (v.pos.distance() != depth + 1)
            throw consistency_error("building_ball: BFS depth != building distance");
          ball.vertices.push_back(std::move(v));
          out_edges.emplace_back();
          next.push_back(ni);
        } else {
          ni = it->second;
        }
        if (edges.insert({vi, ni}).second) out_edges[vi].push_back({ni, g->type});
        // mirror edge exists in the building via the inverse generator
        if (edges.insert({ni, vi}).second)
          out_edges[ni].push_back({vi, (R.d - g->type) % R.d});
      }
    }
    ball.layer_sizes.push_back((long long)next.size());
    frontier = std::move(next);
  }
  // depth-`radius` vertices were never expanded, so edges between two
  // boundary vertices are still missing; complete them without growing the
  // ball, so the facet list is the full induced clique set
  for (int vi : frontier) {
    for (const Generator* g : gens) {
      CSElement w = (ball.vertices[vi].elem * g->elem).canonical();
      auto it = index.find(w.key());
      if (it == index.end()) continue;
      int ni = it->second;
      if (edges.insert({vi, ni}).second) out_edges[vi].push_back({ni, g->type});
      if (edges.insert({ni, vi}).second)
        out_edges[ni].push_back({vi, (R.d - g->type) % R.d});
    }
  }
  ball.adj = std::move(out_edges);

  // facets: d-cliques; ordered extension over sorted adjacency
  std::vector<std::vector<int>> und(ball.vertices.size());
  for (size_t i = 0; i < ball.adj.size(); ++i)
    for (auto [j, t] : ball.adj[i]) und[i].push_back(j);
  for (auto& v : und) std::sort(v.begin(), v.end());

  std::vector<int> clique;
  std::function<void(const std::vector<int>&)> extend =
      [&](const std::vector<int>& cands) {
        if ((int)clique.size() == ball.d) {
          ball.facets.push_back(clique);
          return;
        }
        for (int c : cands) {
          std::vector<int> nxt;
          for (int x : cands)
            if (x > c && std::binary_search(und[c].begin(), und[c].end(), x))
              nxt.push_back(x);
          clique.push_back(c);
          if ((int)clique.size() + (int)nxt.size() >= ball.d) extend(nxt);
          clique.pop_back();
        }
      };
  std::vector<int> all(ball.vertices.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  extend(all);
  return ball;
}

struct LocalStructureReport {
  bool pass;
  long long facets_through_center;
  long long expected_flag_count;
  long long walls_through_center;
  bool walls_in_q_plus_1_facets;
  std::vector<long long> sigma_sizes;       // |Sigma_i| as enumerated
  std::vector<long long> neighbor_by_type;  // depth-1 vertices per type
  std::string message;
};

// Number of complete flags of F_q^d.
inline long long flag_count(int d, long long q) {
  long long r = 1;
  for (int j = 2; j <= d; ++j) r *= gaussian_binomial(j, 1, q);
  return r;
}

inline LocalStructureReport verify_local_structure(const BuildingBall& ball,
                                                   const GeneratorSet& gs) {
  if (ball.radius < 2)
    throw parameter_error("verify_local_structure: need radius >= 2");
  LocalStructureReport rep{};
  rep.pass = true;
  int d = ball.d;
  long long q = ball.q;

  long long through = 0;
  std::map<std::vector<int>, long long> wall_facets;
  for (const auto& f : ball.facets) {
    if (std::find(f.begin(), f.end(), 0) == f.end()) continue;
    ++through;
    for (int omit = 0; omit < d; ++omit) {
      if (f[omit] == 0) continue;  // wall must contain the center
      std::vector<int> w;
      for (int t = 0; t < d; ++t)
        if (t != omit) w.push_back(f[t]);
      wall_facets[w] = 0;
    }
  }
  rep.facets_through_center = through;
  rep.expected_flag_count = flag_count(d, q);
  if (through != rep.expected_flag_count) rep.pass = false;

  for (const auto& f : ball.facets)
    for (auto& [w, cnt] : wall_facets)
      if (std::includes(f.begin(), f.end(), w.begin(), w.end())) ++cnt;
  rep.walls_through_center = (long long)wall_facets.size();
  rep.walls_in_q_plus_1_facets = true;
  for (const auto& [w, cnt] : wall_facets)
    if (cnt != q + 1) {
      rep.walls_in_q_plus_1_facets = false;
      rep.pass = false;
    }

  rep.neighbor_by_type.assign(d, 0);
  for (const auto& v : ball.vertices)
    if (v.depth == 1) ++rep.neighbor_by_type[v.type];
  rep.sigma_sizes.assign(d, 0);
  for (int i = 1; i < d; ++i) rep.sigma_sizes[i] = (long long)gs.sigma[i].size();
  for (int i = 1; i < d; ++i)
    if (rep.neighbor_by_type[i] != rep.sigma_sizes[i]) rep.pass = false;
  rep.message = rep.pass ? "local structure verified" : "local structure MISMATCH";
  return rep;
}

}  // namespace rcx::cslattice
