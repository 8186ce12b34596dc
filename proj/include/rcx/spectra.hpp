#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "rcx/complex.hpp"

namespace rcx::spectra {

using cplx::BipartiteIncidence;
using cplx::Graph;
using laurent::RelPosition;

struct OperatorHandle {
  long long dim = 0;
  bool symmetric = true;
  std::function<void(const double*, double*)> apply;
};

inline OperatorHandle adjacency_operator(const Graph& g) {
  OperatorHandle op;
  op.dim = g.n;
  op.symmetric = true;
  op.apply = [&g](const double* x, double* y) {
    for (long long v = 0; v < g.n; ++v) {
      double acc = 0;
      for (int u : g.adj[v]) acc += x[u];
      y[v] = acc;
    }
  };
  return op;
}

// Unnormalized adjacency of the vertices-versus-walls graph, one symmetric
// operator on V_i ⊔ E_i (left block first).
inline OperatorHandle incidence_operator(const BipartiteIncidence& B) {
  OperatorHandle op;
  long long nl = (long long)B.left.size();
  long long nw = (long long)B.walls.size();
  op.dim = nl + nw;
  op.symmetric = true;
  op.apply = [&B, nl](const double* x, double* y) {
    for (size_t v = 0; v < B.left_adj.size(); ++v) {
      double acc = 0;
      for (int w : B.left_adj[v]) acc += x[nl + w];
      y[v] = acc;
    }
    for (size_t w = 0; w < B.wall_adj.size(); ++w) {
      double acc = 0;
      for (int v : B.wall_adj[w]) acc += x[v];
      y[nl + w] = acc;
    }
  };
  return op;
}

// Path-count operator of the two-step multigraph (loops included).
inline OperatorHandle multigraph_operator(const cplx::MultiGraph& M) {
  OperatorHandle op;
  op.dim = M.n;
  op.symmetric = true;
  op.apply = [&M](const double* x, double* y) {
    for (long long v = 0; v < M.n; ++v) {
      double acc = 0;
      for (auto [w, c] : M.weight[v]) acc += double(c) * x[w];
      y[v] = acc;
    }
  };
  return op;
}

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  std::string method;
  double residual = 0;
};

namespace detail {

inline Eigen::MatrixXd materialize(const OperatorHandle& op) {
  long long n = op.dim;
  Eigen::MatrixXd A(n, n);
  std::vector<double> e(n, 0.0), col(n);
  for (long long j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e.data(), col.data());
    for (long long i = 0; i < n; ++i) A(i, j) = col[i];
    e[j] = 0.0;
  }
  return A;
}

inline void check_symmetry(const OperatorHandle& op, double tol = 1e-9) {
  long long n = op.dim;
  if (n == 0) return;
  SplitMix64 rng(0x5bd1e995u ^ (std::uint64_t)n);
  std::vector<double> v(n), w(n), av(n), aw(n);
  for (int probe = 0; probe < 3; ++probe) {
    double scale = 0;
    for (long long i = 0; i < n; ++i) {
      v[i] = double(rng.next() >> 11) / double(1ULL << 53) - 0.5;
      w[i] = double(rng.next() >> 11) / double(1ULL << 53) - 0.5;
    }
    op.apply(v.data(), av.data());
    op.apply(w.data(), aw.data());
    double avw = 0, vaw = 0;
    for (long long i = 0; i < n; ++i) {
      avw += av[i] * w[i];
      vaw += v[i] * aw[i];
      scale += std::abs(av[i]) + std::abs(aw[i]);
    }
    if (std::abs(avw - vaw) > tol * std::max(1.0, scale))
      throw math_error("operator violates its symmetry contract");
  }
}

}  // namespace detail

// Full symmetric eigendecomposition; dimension-capped.
inline Spectrum dense_spectrum(const OperatorHandle& op, long long threshold = 4096) {
  if (!op.symmetric) throw math_error("dense_spectrum: operator not symmetric");
  if (op.dim > threshold)
    throw parameter_error("dense_spectrum: dimension above the dense threshold");
  detail::check_symmetry(op);
  long long n = op.dim;
  Spectrum s;
  s.method = "dense";
  if (n == 0) return s;
  Eigen::MatrixXd A = detail::materialize(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw math_error("dense_spectrum: eigensolver failed");
  s.eigenvalues.resize(n);
  for (long long i = 0; i < n; ++i) s.eigenvalues[i] = es.eigenvalues()(n - 1 - i);
  // reconstruction residual on the extreme eigenpairs
  double resid = 0, scale = std::max(1.0, std::abs(s.eigenvalues.front()));
  for (long long idx : {(long long)0, n - 1}) {
    Eigen::VectorXd v = es.eigenvectors().col(idx);
    Eigen::VectorXd r = A * v - es.eigenvalues()(idx) * v;
    resid = std::max(resid, r.cwiseAbs().maxCoeff());
  }
  s.residual = resid / scale;
  if (s.residual > 1e-9)
    throw math_error("dense_spectrum: reconstruction residual too large");
  return s;
}

struct ExtremeEigen {
  double max_abs = 0;
  double max_signed = 0;
  double min_signed = 0;
  int iterations = 0;
  double residual = 0;
  bool converged = false;
};

// Krylov iteration with full reorthogonalization and explicit deflation of
// the supplied eigenvectors.  Extremal Ritz values converge when their
// residual bound |beta_k * s_last| drops below tol.
inline ExtremeEigen lanczos_extremes(const OperatorHandle& op,
                                     std::vector<std::vector<double>> deflate,
                                     double tol = 1e-6, int maxit = 300,
                                     std::uint64_t seed = 0x9e3779b9ULL) {
  if (!op.symmetric) throw math_error("lanczos_extremes: operator not symmetric");
  long long n = op.dim;
  maxit = (int)std::min<long long>(maxit, n);
  // orthonormalize the deflation space
  std::vector<std::vector<double>> U;
  for (auto& u : deflate) {
    for (const auto& prev : U) {
      double dot = 0;
      for (long long i = 0; i < n; ++i) dot += u[i] * prev[i];
      for (long long i = 0; i < n; ++i) u[i] -= dot * prev[i];
    }
    double nrm = 0;
    for (long long i = 0; i < n; ++i) nrm += u[i] * u[i];
    nrm = std::sqrt(nrm);
    if (nrm > 1e-12) {
      for (long long i = 0; i < n; ++i) u[i] /= nrm;
      U.push_back(std::move(u));
    }
  }
  auto project = [&](std::vector<double>& v) {
    for (const auto& u : U) {
      double dot = 0;
      for (long long i = 0; i < n; ++i) dot += v[i] * u[i];
      for (long long i = 0; i < n; ++i) v[i] -= dot * u[i];
    }
  };

  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta;
  SplitMix64 rng(seed ^ (std::uint64_t)n);
  std::vector<double> v(n);
  for (long long i = 0; i < n; ++i)
    v[i] = double(rng.next() >> 11) / double(1ULL << 53) - 0.5;
  project(v);
  {
    double nrm = 0;
    for (long long i = 0; i < n; ++i) nrm += v[i] * v[i];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12)
      throw math_error("lanczos_extremes: start vector deflated to zero");
    for (long long i = 0; i < n; ++i) v[i] /= nrm;
  }
  V.push_back(v);

  ExtremeEigen out;
  std::vector<double> w(n);
  for (int k = 0; k < maxit; ++k) {
    op.apply(V[k].data(), w.data());
    if (k > 0)
      for (long long i = 0; i < n; ++i) w[i] -= beta[k - 1] * V[k - 1][i];
    double a = 0;
    for (long long i = 0; i < n; ++i) a += w[i] * V[k][i];
    alpha.push_back(a);
    for (long long i = 0; i < n; ++i) w[i] -= a * V[k][i];
    // full reorthogonalization, two passes, plus deflation
    for (int pass = 0; pass < 2; ++pass) {
      project(w);
      for (const auto& b : V) {
        double dot = 0;
        for (long long i = 0; i < n; ++i) dot += w[i] * b[i];
        for (long long i = 0; i < n; ++i) w[i] -= dot * b[i];
      }
    }
    double b = 0;
    for (long long i = 0; i < n; ++i) b += w[i] * w[i];
    b = std::sqrt(b);
    beta.push_back(b);

    // Ritz values of the tridiagonal section
    int m = k + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    double lo = es.eigenvalues()(0), hi = es.eigenvalues()(m - 1);
    double rlo = std::abs(b * es.eigenvectors()(m - 1, 0));
    double rhi = std::abs(b * es.eigenvectors()(m - 1, m - 1));
    out.iterations = m;
    out.max_signed = hi;
    out.min_signed = lo;
    out.max_abs = std::max(std::abs(hi), std::abs(lo));
    out.residual = std::max(rlo, rhi);
    if (out.residual < tol || b < 1e-13) {
      out.converged = true;
      return out;
    }
    for (long long i = 0; i < n; ++i) w[i] /= b;
    V.push_back(w);
  }
  return out;  // converged == false; caller decides
}

// Known extremal eigenvectors of a biregular vertices-versus-walls graph:
// sqrt(k1) on the left block, +-sqrt(k2) on the right block.
inline std::vector<std::vector<double>> biregular_extremal_pair(
    const BipartiteIncidence& B) {
  long long nl = (long long)B.left.size(), nw = (long long)B.walls.size();
  std::vector<double> plus(nl + nw), minus(nl + nw);
  double a = std::sqrt((double)B.k_left), b = std::sqrt((double)B.l_right);
  for (long long i = 0; i < nl; ++i) plus[i] = minus[i] = a;
  for (long long i = nl; i < nl + nw; ++i) {
    plus[i] = b;
    minus[i] = -b;
  }
  return {plus, minus};
}

// Largest eigenvalue modulus on the orthogonal complement of the excluded
// eigenvectors.  Tries the dense path when cheap, otherwise iterates.
struct SecondEigenvalue {
  double max_abs = 0;
  double max_signed = 0;
  std::string method;
};

inline SecondEigenvalue second_eigenvalue(
    const OperatorHandle& op, const std::vector<std::vector<double>>& exclude,
    double tol = 1e-6, long long dense_threshold = 4096) {
  if (!op.symmetric) throw math_error("second_eigenvalue: operator not symmetric");
  SecondEigenvalue r;
  long long n = op.dim;
  if (n <= dense_threshold) {
    detail::check_symmetry(op);
    Eigen::MatrixXd A = detail::materialize(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
      throw math_error("second_eigenvalue: eigensolver failed");
    // drop, per excluded vector, the eigenpair its direction overlaps most
    std::vector<char> dropped(n, 0);
    for (const auto& u : exclude) {
      Eigen::VectorXd uu(n);
      for (long long i = 0; i < n; ++i) uu(i) = u[i];
      double nrm = uu.norm();
      if (nrm < 1e-12) continue;
      uu /= nrm;
      long long best = -1;
      double best_ov = -1;
      for (long long i = 0; i < n; ++i) {
        if (dropped[i]) continue;
        double ov = std::abs(es.eigenvectors().col(i).dot(uu));
        if (ov > best_ov) { best_ov = ov; best = i; }
      }
      if (best >= 0) dropped[best] = 1;
    }
    r.method = "dense";
    r.max_abs = 0;
    r.max_signed = -std::numeric_limits<double>::infinity();
    for (long long i = 0; i < n; ++i) {
      if (dropped[i]) continue;
      double ev = es.eigenvalues()(i);
      r.max_abs = std::max(r.max_abs, std::abs(ev));
      r.max_signed = std::max(r.max_signed, ev);
    }
    return r;
  }
  ExtremeEigen e = lanczos_extremes(op, exclude, tol);
  if (!e.converged)
    throw math_error("second_eigenvalue: no convergence within iteration cap, residual " +
                     std::to_string(e.residual));
  r.max_abs = e.max_abs;
  r.max_signed = e.max_signed;
  r.method = "iterative";
  return r;
}

inline double normalized_lambda(long long k1, long long k2, double lambda) {
  if (k1 <= 0 || k2 <= 0)
    throw parameter_error("normalized_lambda: graph is not biregular");
  return lambda / std::sqrt(double(k1) * double(k2));
}

struct SymmetryCheck {
  bool symmetric;
  double max_mismatch;
};

// Multiset equality of the spectrum with its negation.
inline SymmetryCheck spectrum_symmetry_check(const Spectrum& s, double tol = 1e-8) {
  SymmetryCheck c{true, 0};
  size_t n = s.eigenvalues.size();
  for (size_t i = 0; i < n; ++i) {
    double mismatch =
        std::abs(s.eigenvalues[i] + s.eigenvalues[n - 1 - i]);
    c.max_mismatch = std::max(c.max_mismatch, mismatch);
  }
  c.symmetric = c.max_mismatch <= tol;
  return c;
}

// ---- closed-form bound evaluators ----

struct XiValue {
  Fraction factor;      // (n(q-1)+q+1)/(q+1)
  double value;         // q^{-n/2} * factor
  double crude_bound;   // (n+1) q^{-n/2}
};

inline XiValue xi_pgl2(long long n, long long q) {
  if (n < 0) throw parameter_error("xi_pgl2: n must be >= 0");
  XiValue x;
  x.factor = Fraction(n * (q - 1) + q + 1, q + 1);
  double qn = std::pow((double)q, -(double)n / 2.0);
  x.value = qn * x.factor.value();
  x.crude_bound = (double)(n + 1) * qn;
  if (x.value > x.crude_bound + 1e-12)
    throw consistency_error("xi_pgl2: closed form exceeds its crude bound");
  return x;
}

// Matrix-coefficient bound (a_d - a_1 + 1) q^{-(a_d - a_1)/2}.
inline double matrix_coeff_bound(const RelPosition& a, long long q) {
  long long n = a.distance();
  return (double)(n + 1) * std::pow((double)q, -(double)n / 2.0);
}

struct LambdaBound {
  double exact_form;  // sqrt(1/(q+1) + (q/(q+1)) * (3/q)) = 2/sqrt(q+1)
  double simplified;  // 2/sqrt(q)
};

inline LambdaBound lambda_theoretical_bound(long long q) {
  if (q < 2) throw parameter_error("lambda_theoretical_bound: q must be >= 2");
  LambdaBound b;
  b.exact_form =
      std::sqrt(1.0 / (q + 1) + (double(q) / (q + 1)) * (3.0 / double(q)));
  b.simplified = 2.0 / std::sqrt((double)q);
  if (b.exact_form > b.simplified + 1e-12)
    throw consistency_error("lambda_theoretical_bound: ordering violated");
  return b;
}

// ---- exact two-step wall operator check at building vertices ----

struct HeckeRow {
  int type;                  // type of the vertex the row is computed at
  long long facets_through;  // = flag count = left degree in the walls graph
  bool wall_degrees_ok;      // every opposite wall lies in exactly q+1 facets
  long long self_count;      // = facets_through (gives self weight 1/(q+1))
  long long hecke_degree;    // distinct two-step targets
  long long uniform_count;   // paths per target; uniform_count * degree = k*q
  long long brute_degree;    // ball vertices at the one-wall-apart position
  bool pass;
};

struct HeckeReport {
  int d;
  long long q;
  bool pass = true;
  Fraction self_weight;  // common to all rows: 1/(q+1)
  std::vector<HeckeRow> rows;
};

// At a vertex v of the ball, the two-step operator through the walls
// opposite v decomposes as (1/(q+1)) . self + (q/(q+1)) . uniform over the
// vertices one wall apart (relative position (0,1,...,1,2)).  All counts are
// integers, so the identity is checked exactly.  The center row needs ball
// radius >= 2; rows at depth-1 vertices of other types need radius >= 3.
inline HeckeReport hecke_row_check(const cslattice::CSAlgebraRep& R,
                                   const cslattice::GeneratorSet& gs,
                                   const cslattice::BuildingBall& ball) {
  if (ball.radius < 2)
    throw parameter_error("hecke_row_check: need ball radius >= 2");
  HeckeReport rep;
  rep.d = ball.d;
  rep.q = ball.q;
  rep.self_weight = Fraction(1, ball.q + 1);
  int d = ball.d;
  long long q = ball.q;

  // index facets by the walls through their vertices
  std::map<std::vector<int>, std::vector<int>> by_wall;
  for (size_t fi = 0; fi < ball.facets.size(); ++fi) {
    const auto& f = ball.facets[fi];
    for (int omit = 0; omit < d; ++omit) {
      std::vector<int> w;
      for (int t = 0; t < d; ++t)
        if (t != omit) w.push_back(f[t]);
      by_wall[w].push_back((int)fi);
    }
  }

  std::vector<long long> expected_pattern(d, 1);
  expected_pattern[0] = 0;
  expected_pattern[d - 1] = 2;

  // rows: the center always; one depth-1 vertex of each type when the ball
  // is deep enough for their two-step stars to be complete
  struct Site {
    int vertex;
    cslattice::CSElement inv;  // inverse of the vertex element
    int type;
  };
  std::vector<Site> sites;
  sites.push_back({0, cslattice::CSElement::identity(R).canonical(), 0});
  if (ball.radius >= 3) {
    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < ball.vertices.size(); ++i)
      index.emplace(ball.vertices[i].elem.key(), (int)i);
    for (int i = 1; i < d; ++i) {
      const auto& g = gs.sigma[i].front();
      auto it = index.find(g.elem.key());
      if (it == index.end())
        throw consistency_error("hecke_row_check: generator missing from ball");
      sites.push_back({it->second, g.inverse, i});
    }
  }

  for (const auto& site : sites) {
    HeckeRow row{};
    row.type = site.type;
    row.pass = true;
    std::map<int, long long> target_count;
    long long walls_bad = 0;
    long long k = 0;
    for (const auto& f : ball.facets) {
      if (std::find(f.begin(), f.end(), site.vertex) == f.end()) continue;
      ++k;
      std::vector<int> w;
      for (int t : f)
        if (t != site.vertex) w.push_back(t);
      const auto& fl = by_wall.at(w);
      if ((long long)fl.size() != q + 1) ++walls_bad;
      for (int fi2 : fl) {
        const auto& f2 = ball.facets[fi2];
        int target = -1;
        for (int t : f2)
          if (std::find(w.begin(), w.end(), t) == w.end()) target = t;
        if (target < 0)
          throw consistency_error("hecke_row_check: degenerate facet pair");
        if (target == site.vertex)
          ++row.self_count;
        else
          ++target_count[target];
      }
    }
    row.facets_through = k;
    row.wall_degrees_ok = walls_bad == 0;
    if (!row.wall_degrees_ok) row.pass = false;
    if (row.self_count != k) row.pass = false;
    if (k != cslattice::flag_count(d, q)) row.pass = false;

    row.hecke_degree = (long long)target_count.size();
    row.uniform_count = target_count.empty() ? 0 : target_count.begin()->second;
    for (auto [t, c] : target_count) {
      if (c != row.uniform_count) row.pass = false;
      auto rp = cslattice::rel_position_identity(
          (site.inv * ball.vertices[t].elem).canonical());
      if (rp.normalized != expected_pattern) row.pass = false;
    }
    if (row.uniform_count * row.hecke_degree != k * q) row.pass = false;

    // cross-check the degree by scanning the whole ball for vertices at the
    // one-wall-apart position relative to the site
    row.brute_degree = 0;
    for (size_t t = 0; t < ball.vertices.size(); ++t) {
      if ((int)t == site.vertex) continue;
      auto rp = cslattice::rel_position_identity(
          (site.inv * ball.vertices[t].elem).canonical());
      if (rp.normalized == expected_pattern) ++row.brute_degree;
    }
    if (row.brute_degree != row.hecke_degree) row.pass = false;
    if (!row.pass) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace rcx::spectra
