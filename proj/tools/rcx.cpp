// Command-line front end: builds Cartwright-Steger generators, congruence
// quotients and their complexes, and runs the spectral / mixing / coloring /
// radius / diameter verifications.

#include <CLI11.hpp>

#include <thread>

#include "rcx/analysis.hpp"
#include "rcx/corpus.hpp"
#include "rcx/report.hpp"

using namespace rcx;
using cplx::Graph;
using cplx::PartiteHypergraph;
using cslattice::BuildingBall;
using cslattice::CSAlgebraRep;
using cslattice::GeneratorSet;
using quotient::CongruenceMap;
using quotient::CoverTable;
using quotient::GroupTable;
using report::fmt;
using report::Report;

namespace {

long long regular_degree(const Graph& g) {
  if (g.n == 0) return 0;
  long long deg = (long long)g.adj[0].size();
  for (const auto& a : g.adj)
    if ((long long)a.size() != deg) return -1;
  return deg;
}

// Recover q from the vertex degree sum_i [d i]_q of a quotient 1-skeleton.
long long infer_q(const Graph& g, int d) {
  long long deg = regular_degree(g);
  if (deg <= 0) return 0;
  for (long long q = 2; q <= 4096; ++q) {
    long long s = 0;
    for (int i = 1; i < d; ++i) s += gaussian_binomial(d, i, q);
    if (s == deg) return q;
    if (s > deg) break;
  }
  return 0;
}

struct SpectralSummary {
  double lambda1 = 0;
  double lambda2_abs = 0;     // largest modulus off the extremal pair(s)
  double lambda2_signed = 0;  // largest signed eigenvalue off lambda1
  bool bipartite = false;
  bool have_full_spectrum = false;
  spectra::Spectrum full;
  std::vector<int> side;  // 2-coloring when bipartite
};

SpectralSummary spectral_summary(const Graph& g, long long dense_threshold) {
  SpectralSummary s;
  auto bp = analysis::bipartiteness_check(g);
  s.bipartite = bp.bipartite;
  s.side = bp.side;
  auto op = spectra::adjacency_operator(g);
  std::vector<std::vector<double>> exclude;
  std::vector<double> ones(g.n, 1.0);
  exclude.push_back(ones);
  if (s.bipartite) {
    std::vector<double> alt(g.n);
    for (long long i = 0; i < g.n; ++i) alt[i] = bp.side[i] ? -1.0 : 1.0;
    exclude.push_back(alt);
  }
  if (g.n <= dense_threshold) {
    s.full = spectra::dense_spectrum(op, dense_threshold);
    s.have_full_spectrum = true;
    s.lambda1 = s.full.eigenvalues.front();
    auto r = spectra::second_eigenvalue(op, exclude, 1e-6, dense_threshold);
    s.lambda2_abs = r.max_abs;
    s.lambda2_signed = r.max_signed;
  } else {
    auto top = spectra::lanczos_extremes(op, {}, 1e-6);
    if (!top.converged) throw math_error("spectral_summary: lambda1 iteration stalled");
    s.lambda1 = top.max_signed;
    auto r = spectra::second_eigenvalue(op, exclude, 1e-6, dense_threshold);
    s.lambda2_abs = r.max_abs;
    s.lambda2_signed = r.max_signed;
  }
  return s;
}

int cmd_generators(long long q, int d, const std::string& out) {
  std::cout << "CONFIG generators q=" << q << " d=" << d << "\n";
  CSAlgebraRep R(d, q);
  GeneratorSet gs = cslattice::enumerate_sigma(R);
  Report rep;
  for (int i = 1; i < d; ++i) {
    long long expect = gaussian_binomial(d, i, q);
    rep.check((long long)gs.sigma[i].size() == expect,
              "sigma" + std::to_string(i) + "-count",
              std::to_string(gs.sigma[i].size()), std::to_string(expect));
    // relative position pattern (0,...,0,1,...,1) with i ones, rechecked here
    bool ok = true;
    for (const auto& g : gs.sigma[i]) {
      auto rp = cslattice::rel_position_identity(g.elem);
      auto rel = laurent::classify_relation(rp, d);
      if (!rel.neighbor || rel.type_offset != i) ok = false;
    }
    rep.check(ok, "sigma" + std::to_string(i) + "-position", ok ? "neighbor" : "bad",
              "type-" + std::to_string(i) + " neighbor");
  }
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw parameter_error("cannot open " + out);
    os << d << ' ' << q << ' ' << gs.total() << "\n";
    for (int i = 1; i < d; ++i)
      for (const auto& g : gs.sigma[i]) os << i << ' ' << g.elem.key() << "\n";
    rep.note("generators written to " + out);
  }
  rep.print(std::cout);
  return rep.exit_code();
}

int cmd_build(long long q, int d, int e, int target_r, const std::string& prefix,
              long long budget, bool force, bool with_cover) {
  std::cout << "CONFIG build q=" << q << " d=" << d << " e=" << e
            << " r=" << target_r << " out=" << prefix << " budget=" << budget
            << " force=" << force << " cover=" << with_cover << "\n";
  CSAlgebraRep R(d, q);
  long long qe = 1;
  for (int i = 0; i < e; ++i) qe *= q;
  unsigned long long projected = psl_order(d, qe);
  if (projected > (unsigned long long)budget && !force)
    throw budget_error("projected group order >= " + std::to_string(projected) +
                       " exceeds the budget; rerun with --force to proceed");
  GeneratorSet gs = cslattice::enumerate_sigma(R);
  CongruenceMap cm = quotient::search_polynomial(*R.Fq, d, e, target_r);
  GroupTable table =
      quotient::generate_group(R, gs, cm, force ? (1LL << 40) : budget);
  std::cout << "f " << cm.f.str() << "\n";
  std::cout << "r " << table.r << "\n";
  std::cout << "order " << table.order << "\n";

  PartiteHypergraph H = cplx::complex_of(table);
  cplx::write_complex(H, prefix + ".rcx");
  quotient::write_group(table, prefix + ".group");
  quotient::write_edges(table, prefix + ".edges");
  std::cout << "wrote " << prefix << ".rcx " << prefix << ".group " << prefix
            << ".edges\n";
  if (with_cover) {
    if (table.r != 1) throw parameter_error("--cover requires a non-partite quotient");
    CoverTable cov = quotient::cover_group(table);
    PartiteHypergraph HC = cplx::complex_of(cov);
    cplx::write_complex(HC, prefix + ".cover.rcx");
    std::cout << "wrote " << prefix << ".cover.rcx\n";
  }
  return 0;
}

void analyze_spectra(Report& rep, const Graph& g, long long q,
                     const SpectralSummary& s) {
  long long deg = regular_degree(g);
  rep.value("vertices", (double)g.n);
  rep.value("degree", (double)deg);
  rep.check(std::abs(s.lambda1 - (double)deg) <= 1e-6, "lambda1", s.lambda1,
            (double)deg);
  double ram = 2.0 * std::sqrt((double)q);
  rep.check(s.lambda2_abs <= ram + 1e-6, "lambda2-ramanujan", s.lambda2_abs, ram);
  if (s.have_full_spectrum && s.bipartite) {
    auto sym = spectra::spectrum_symmetry_check(s.full);
    rep.check(sym.symmetric, "spectrum-symmetric", sym.max_mismatch, 1e-8);
  } else if (s.bipartite) {
    rep.note("bipartite input above the dense threshold: symmetry follows from "
             "the 2-coloring; multiset check skipped");
  }
  rep.value("bipartite", s.bipartite ? "yes" : "no");
}

void analyze_mixing(Report& rep, const PartiteHypergraph& H, const Graph& g,
                    long long q, const SpectralSummary& s, std::uint64_t seed,
                    long long samples, long long dense_threshold, int threads,
                    std::ostream* samples_csv) {
  // pairwise (S,T) mixing on the bipartite 1-skeleton.  Sample t depends only
  // on (seed, t), so the partition across threads cannot change the report.
  if (H.d == 2 && s.bipartite) {
    analysis::BipartiteView view = analysis::bipartite_view(g, s.side);
    std::vector<long long> fail_part(threads, 0);
    std::vector<Fraction> max_part(threads, Fraction(0));
    std::vector<std::string> csv_part(threads);
    auto worker = [&](int w) {
      for (long long t = w; t < samples; t += threads) {
        SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t)(t + 1)));
        std::vector<int> S, T;
        for (int v : view.v1)
          if (rng.coin()) S.push_back(v);
        for (int v : view.v2)
          if (rng.coin()) T.push_back(v);
        auto m = analysis::bipartite_mixing_check(view, S, T, s.lambda2_abs);
        if (!m.pass_normalized || !m.pass_unnormalized) ++fail_part[w];
        if (max_part[w] < m.disc) max_part[w] = m.disc;
        if (samples_csv)
          csv_part[w] += std::to_string(t) + "," + std::to_string(S.size()) + "," +
                         std::to_string(T.size()) + "," +
                         std::to_string(m.crossing) + "," + m.disc.str() + "," +
                         fmt(m.bound_normalized) + "," +
                         (m.pass_normalized ? "1" : "0") + "\n";
      }
    };
    if (threads <= 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
      for (auto& th : pool) th.join();
    }
    long long failures = 0;
    Fraction maxdisc(0);
    for (int w = 0; w < threads; ++w) {
      failures += fail_part[w];
      if (maxdisc < max_part[w]) maxdisc = max_part[w];
    }
    if (samples_csv) {
      *samples_csv << "sample,S,T,crossing,disc,bound,pass\n";
      // rows sorted by sample index for a deterministic appendix
      std::vector<std::string> rows;
      for (const auto& part : csv_part) {
        std::istringstream is(part);
        std::string row;
        while (std::getline(is, row)) rows.push_back(row);
      }
      std::sort(rows.begin(), rows.end(), [](const std::string& a, const std::string& b) {
        return std::stoll(a.substr(0, a.find(','))) <
               std::stoll(b.substr(0, b.find(',')));
      });
      for (const auto& row : rows) *samples_csv << row << "\n";
    }
    rep.check(failures == 0, "pair-mixing-failures", (double)failures, 0.0);
    rep.value("pair-mixing-max-disc", maxdisc.value());
    rep.value("pair-mixing-samples", (double)samples);
  }
  // typed discrepancy bound over sampled families
  if (H.has_types() && H.r == H.d) {
    auto lambdas = analysis::walls_graph_lambdas(H, dense_threshold);
    auto drep = analysis::hypergraph_mixing_check(H, lambdas, false, seed, samples, q);
    for (size_t i = 0; i < lambdas.size(); ++i)
      rep.value("lambda-tilde-B" + std::to_string(i), lambdas[i]);
    rep.check(drep.failures == 0, "typed-mixing-failures", (double)drep.failures, 0.0);
    rep.value("typed-mixing-max-disc", drep.max_disc.value());
    rep.check(drep.theorem_failures == 0, "typed-mixing-global-bound",
              drep.max_disc.value(), drep.theorem_bound);
  } else {
    rep.note("input carries no full d-type function; typed mixing needs the cover");
  }
}

void analyze_color(Report& rep, const PartiteHypergraph& H, const Graph& g,
                   long long q, const PartiteHypergraph* cover) {
  auto bp = analysis::bipartiteness_check(g);
  rep.value("bipartite", bp.bipartite ? "yes" : "no");
  if (!bp.bipartite) {
    std::string walk;
    for (size_t i = 0; i < bp.odd_walk.size() && i < 24; ++i)
      walk += (i ? "-" : "") + std::to_string(bp.odd_walk[i]);
    rep.value("odd-walk", walk);
    rep.check(bp.odd_walk.size() % 2 == 0, "odd-walk-length",
              (double)(bp.odd_walk.size() - 1), 1.0);
  }
  auto greedy = analysis::chromatic_greedy(H);
  rep.value("chromatic-greedy", (double)greedy.colors);
  int best = greedy.colors;
  if (H.n <= 60) {
    auto exact = analysis::chromatic_number(H);
    rep.value("chromatic-exact", (double)exact.colors);
    best = exact.colors;
  }
  if (H.r == 1) {
    std::vector<double> lambdas;
    if (cover) lambdas = analysis::walls_graph_lambdas(*cover);
    auto b = analysis::chromatic_lower_bound(q, H.d, lambdas, 1);
    rep.value("chromatic-lb-half", b.half_form);
    rep.value("chromatic-lb-exact-form", b.exact_form);
    if (cover) rep.value("chromatic-lb-empirical", b.empirical);
    if (b.half_form > 1.0)
      rep.check((double)best >= std::ceil(b.half_form - 1e-9), "chromatic-vs-lb",
                (double)best, std::ceil(b.half_form - 1e-9));
    else
      rep.note("chromatic lower bound below 1 at this q: vacuous, reported only");
  }
}

void analyze_radius(Report& rep, const PartiteHypergraph& H, const Graph& g,
                    long long q, int e) {
  if (H.d == 2) {
    int cap = 4;
    for (;;) {
      auto building = analysis::tree_ball_sizes(q, cap);
      try {
        auto rr = analysis::injectivity_radius(g, building, q, H.d, e);
        rep.value("radius-measured", (double)rr.measured);
        rep.value("radius-bound-value", rr.cor_bound_value);
        rep.check(rr.measured >= rr.required_from_cor, "radius-vs-bound",
                  (double)rr.measured, (double)rr.required_from_cor);
        if (e > 0) rep.value("dist-lower-bound", rr.dist_bound);
        return;
      } catch (const parameter_error&) {
        cap *= 2;
        if (cap > 64) throw;
      }
    }
  }
  rep.note("radius check for d >= 3 needs a building ball oracle; run the ball "
           "command at the required radius");
}

void analyze_diameter(Report& rep, const Graph& g, const SpectralSummary& s) {
  auto dr = analysis::diameter(g, true, s.lambda1, s.lambda2_signed);
  rep.value("diameter", (double)dr.diameter);
  rep.check(dr.pass, "diameter-vs-spectral-bound", (double)dr.diameter, dr.bound);
}

int cmd_analyze(const std::string& in, const std::string& cover_path,
                const std::string& checks, std::uint64_t seed, long long samples,
                long long q_flag, int e_flag, long long dense_threshold,
                int threads, const std::string& spectrum_out,
                const std::string& samples_out) {
  std::cout << "CONFIG analyze in=" << in << " cover=" << cover_path
            << " checks=" << checks << " seed=" << seed << " samples=" << samples
            << " q=" << q_flag << " e=" << e_flag
            << " dense-threshold=" << dense_threshold << " threads=" << threads
            << "\n";
  PartiteHypergraph H = cplx::read_complex(in);
  Graph g = H.skeleton();
  long long q = q_flag > 0 ? q_flag : infer_q(g, H.d);
  if (q == 0)
    throw parameter_error("cannot infer q from the skeleton; pass --q");
  std::unique_ptr<PartiteHypergraph> cover;
  std::unique_ptr<Graph> cover_g;
  if (!cover_path.empty()) {
    cover = std::make_unique<PartiteHypergraph>(cplx::read_complex(cover_path));
    cover_g = std::make_unique<Graph>(cover->skeleton());
  }
  Report rep;
  rep.value("q", (double)q);
  rep.value("d", (double)H.d);
  rep.value("r", (double)H.r);

  auto wants = [&](const std::string& c) {
    return checks == "all" || checks.find(c) != std::string::npos;
  };
  SpectralSummary s;
  bool need_spectra = wants("spectra") || wants("mixing") || wants("diameter");
  if (need_spectra) s = spectral_summary(g, dense_threshold);
  if (wants("spectra")) {
    analyze_spectra(rep, g, q, s);
    if (!spectrum_out.empty() && s.have_full_spectrum) {
      std::ofstream os(spectrum_out);
      if (!os) throw parameter_error("cannot open " + spectrum_out);
      os << "index,eigenvalue\n";
      for (size_t i = 0; i < s.full.eigenvalues.size(); ++i)
        os << i << ',' << fmt(s.full.eigenvalues[i]) << "\n";
      rep.note("spectrum written to " + spectrum_out);
    }
  }
  if (wants("mixing")) {
    std::unique_ptr<std::ofstream> csv;
    if (!samples_out.empty()) {
      csv = std::make_unique<std::ofstream>(samples_out);
      if (!*csv) throw parameter_error("cannot open " + samples_out);
    }
    analyze_mixing(rep, H, g, q, s, seed, samples, dense_threshold, threads,
                   csv.get());
    if (cover) {
      SpectralSummary sc = spectral_summary(*cover_g, dense_threshold);
      rep.note("cover mixing:");
      analyze_mixing(rep, *cover, *cover_g, q, sc, seed, samples, dense_threshold,
                     threads, nullptr);
    }
    if (csv) rep.note("sample appendix written to " + samples_out);
  }
  if (wants("color")) analyze_color(rep, H, g, q, cover.get());
  if (wants("radius")) analyze_radius(rep, H, g, q, e_flag);
  if (wants("diameter")) analyze_diameter(rep, g, s);
  rep.print(std::cout);
  return rep.exit_code();
}

int cmd_ball(long long q, int d, int radius, const std::string& out,
             long long budget) {
  std::cout << "CONFIG ball q=" << q << " d=" << d << " radius=" << radius
            << " budget=" << budget << "\n";
  CSAlgebraRep R(d, q);
  GeneratorSet gs = cslattice::enumerate_sigma(R);
  BuildingBall ball = cslattice::building_ball(R, gs, radius, budget);
  Report rep;
  rep.value("vertices", (double)ball.size());
  for (size_t i = 0; i < ball.layer_sizes.size(); ++i)
    rep.value("layer" + std::to_string(i), (double)ball.layer_sizes[i]);
  if (radius >= 2) {
    auto ls = cslattice::verify_local_structure(ball, gs);
    rep.check(ls.facets_through_center == ls.expected_flag_count,
              "facets-through-center", (double)ls.facets_through_center,
              (double)ls.expected_flag_count);
    rep.check(ls.walls_in_q_plus_1_facets, "walls-in-q+1-facets",
              ls.walls_in_q_plus_1_facets ? "yes" : "no", "q+1");
    auto hk = spectra::hecke_row_check(R, gs, ball);
    for (const auto& row : hk.rows) {
      rep.check(row.pass, "two-step-row-type" + std::to_string(row.type),
                std::to_string(row.self_count) + "/" +
                    std::to_string(row.facets_through * (q + 1)) + " self, " +
                    std::to_string(row.uniform_count) + " per target",
                "1/" + std::to_string(q + 1) + " self + uniform");
      rep.value("hecke-degree-type" + std::to_string(row.type),
                (double)row.hecke_degree);
    }
  }
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw parameter_error("cannot open " + out);
    os << "BALL d=" << d << " q=" << q << " radius=" << radius
       << " vertices=" << ball.size() << "\n";
    for (size_t i = 0; i < ball.vertices.size(); ++i) {
      const auto& v = ball.vertices[i];
      os << i << ' ' << v.depth << ' ' << v.pos.str() << ' ' << v.elem.key()
         << "\n";
    }
    for (const auto& f : ball.facets) {
      os << "FACET";
      for (int v : f) os << ' ' << v;
      os << "\n";
    }
    rep.note("ball written to " + out);
  }
  rep.print(std::cout);
  return rep.exit_code();
}

int cmd_bounds(long long q, int d, int nmax) {
  std::cout << "CONFIG bounds q=" << q << " d=" << d << " nmax=" << nmax << "\n";
  Report rep;
  for (int n = 0; n <= nmax; ++n) {
    auto x = spectra::xi_pgl2(n, q);
    rep.value("xi-pgl2-n" + std::to_string(n),
              fmt(x.value) + " (= q^{-n/2} * " + x.factor.str() + ", crude " +
                  fmt(x.crude_bound) + ")");
  }
  for (int i = 1; i < d; ++i) {
    std::vector<long long> a(d, 0);
    for (int t = d - i; t < d; ++t) a[t] = 1;
    auto rp = laurent::RelPosition::from_raw(std::move(a));
    rep.value("matrix-coeff-bound-neighbor-type" + std::to_string(i),
              spectra::matrix_coeff_bound(rp, q));
  }
  {
    std::vector<long long> a(d, 1);
    a[0] = 0;
    a[d - 1] = 2;
    auto rp = laurent::RelPosition::from_raw(std::move(a));
    rep.value("matrix-coeff-bound-one-wall-apart", spectra::matrix_coeff_bound(rp, q));
  }
  auto lb = spectra::lambda_theoretical_bound(q);
  rep.value("lambda-tilde-bound-exact", lb.exact_form);
  rep.value("lambda-tilde-bound-simplified", lb.simplified);
  double root = std::pow((double)q, 1.0 / (2.0 * d));
  rep.value("chromatic-lb-half", 0.5 * root);
  rep.value("chromatic-lb-exact-form", std::pow(2.0 * d, -1.0 / d) * root);
  rep.print(std::cout);
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramanujan complex construction and verification toolkit"};
  app.require_subcommand(1);

  long long q = 3;
  int d = 2, e = 2, target_r = 1, radius = 2, nmax = 6, e_flag = 0;
  long long budget = 2000000, samples = 10000, q_flag = 0, dense_threshold = 4096;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out, prefix = "quotient", in, cover_path, checks = "all";
  std::string spectrum_out, samples_out;
  bool force = false, with_cover = false;

  auto* gen = app.add_subcommand("generators", "generator sets and their counts");
  gen->add_option("--q", q, "residue field size (odd prime power)")->required();
  gen->add_option("--d", d, "dimension parameter")->required();
  gen->add_option("--out", out, "export file");

  auto* bld = app.add_subcommand("build", "congruence quotient and complex files");
  bld->add_option("--q", q)->required();
  bld->add_option("--d", d)->required();
  bld->add_option("--e", e, "degree of the congruence polynomial")->required();
  bld->add_option("--r", target_r, "partite index to realize")->required();
  bld->add_option("--out", prefix, "output prefix");
  bld->add_option("--budget", budget, "element budget");
  bld->add_flag("--force", force, "proceed past the budget");
  bld->add_flag("--cover", with_cover, "also write the type-restoring cover");

  auto* ana = app.add_subcommand("analyze", "verification report for a complex");
  ana->add_option("--in", in, "RCX complex file")->required();
  ana->add_option("--cover", cover_path, "cover complex for non-partite inputs");
  ana->add_option("--checks", checks, "spectra|mixing|color|radius|diameter|all");
  ana->add_option("--seed", seed, "sampling seed");
  ana->add_option("--samples", samples, "sample count");
  ana->add_option("--q", q_flag, "override the inferred q");
  ana->add_option("--e", e_flag, "degree of the congruence polynomial");
  ana->add_option("--dense-threshold", dense_threshold, "dense eigensolver cap");
  ana->add_option("--threads", threads, "worker threads for the samplers");
  ana->add_option("--spectrum-out", spectrum_out, "CSV of the full spectrum");
  ana->add_option("--samples-out", samples_out, "CSV appendix of mixing samples");

  auto* bal = app.add_subcommand("ball", "building ball dump and local checks");
  bal->add_option("--q", q)->required();
  bal->add_option("--d", d)->required();
  bal->add_option("--radius", radius)->required();
  bal->add_option("--out", out, "ball dump file");
  bal->add_option("--budget", budget, "vertex budget");

  auto* bnd = app.add_subcommand("bounds", "closed-form bound tables");
  bnd->add_option("--q", q)->required();
  bnd->add_option("--d", d);
  bnd->add_option("--nmax", nmax);

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_generators(q, d, out);
    if (bld->parsed())
      return cmd_build(q, d, e, target_r, prefix, budget, force, with_cover);
    if (ana->parsed())
      return cmd_analyze(in, cover_path, checks, seed, samples, q_flag, e_flag,
                         dense_threshold, std::max(1, threads), spectrum_out,
                         samples_out);
    if (bal->parsed()) return cmd_ball(q, d, radius, out, budget);
    if (bnd->parsed()) return cmd_bounds(q, d, nmax);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
