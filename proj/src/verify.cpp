#include "ktrace/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <utility>

#include "ktrace/bounds.hpp"
#include "ktrace/concavity.hpp"
#include "ktrace/ensemble.hpp"
#include "ktrace/errors.hpp"
#include "ktrace/hermitian.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/mixed_discriminant.hpp"
#include "ktrace/random.hpp"
#include "ktrace/wedge.hpp"

namespace ktrace {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", v);
  return buf;
}

// Accumulates the worst value of one monitored quantity into a SuiteResult
// row; rows are phrased so that larger is always worse.
class Tracker {
 public:
  Tracker(SuiteResult& out, std::string label, double limit)
      : out_(out), idx_(out.rows.size()) {
    CheckRow row;
    row.label = std::move(label);
    row.limit = limit;
    row.worst = -std::numeric_limits<double>::infinity();
    row.passed = true;
    out_.rows.push_back(std::move(row));
  }

  void observe(double v, int instance) {
    CheckRow& row = out_.rows[idx_];
    if (v > row.worst) row.worst = v;
    if (!(v <= row.limit)) {
      row.passed = false;
      if (out_.failures.size() < 40) {
        out_.failures.push_back("instance " + std::to_string(instance) + ": " +
                                row.label + " = " + fmt(v) + " exceeds " +
                                fmt(row.limit));
      }
    }
  }

 private:
  SuiteResult& out_;
  std::size_t idx_;
};

double tol_factor(const SuiteConfig& cfg) {
  return cfg.tol > 0.0 ? cfg.tol : 1.0;
}

int pick_n(const SuiteConfig& cfg, Rng& rng, int lo, int hi) {
  if (cfg.n > 0) return std::clamp(cfg.n, lo, hi);
  return lo + rng.uniform_int(hi - lo + 1);
}

HermitianMatrix rand_pd_spectrum(Rng& rng, int n, double lo, double hi) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(rng, n, n));
  CMatrix q = qr.householderQ();
  RVector d(n);
  for (int i = 0; i < n; ++i) d[i] = lo * std::pow(hi / lo, rng.uniform());
  CMatrix m = q * d.asDiagonal() * q.adjoint();
  return hermitian_unchecked((m + m.adjoint()) / 2.0);
}

// --- suite: ktrace-triple -------------------------------------------------

void suite_ktrace_triple(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 200;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker disc(out, "max pairwise relative gap among eigen/minors/charpoly",
               1e-10 * tf);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 10);
    double scale = std::pow(10.0, double(rng.uniform_int(5)) - 2.0);
    HermitianMatrix a = hermitian_unchecked(random_hermitian(rng, n) * scale);
    for (int k = 1; k <= n; ++k) {
      double ve = trace_k_eigen(a, k).value;
      double vm = trace_k_minors(a, k).value;
      double vc = trace_k_charpoly(a.mat(), k).value;
      double denom = std::max({std::abs(ve), std::abs(vm), std::abs(vc),
                               std::numeric_limits<double>::min()});
      double gap = std::max({std::abs(ve - vm), std::abs(ve - vc),
                             std::abs(vm - vc)});
      disc.observe(gap / denom, i);
    }
  }
}

// --- suite: wedge ----------------------------------------------------------

void suite_wedge(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 100;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker compound(out, "compound trace vs k-trace relative gap", 1e-9 * tf);
  Tracker mixed(out, "mixed discriminant wedge vs bruteforce relative gap",
                1e-9 * tf);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    int k = cfg.k > 0 ? std::clamp(cfg.k, 1, n) : 1 + rng.uniform_int(n);
    SubsetBasis basis(n, k);

    CMatrix a = random_hermitian(rng, n);
    double wt = wedge_trace(m0(a, basis)).real();
    double tk = trace_k_eigen(hermitian_unchecked(a), k).value;
    compound.observe(std::abs(wt - tk) / comparison_scale(wt, tk), i);

    std::vector<CMatrix> as;
    for (int j = 0; j < k; ++j) as.push_back(random_hermitian(rng, n));
    double dw = mixed_disc_via_wedge(as, n).value;
    std::vector<CMatrix> padded = as;
    for (int j = k; j < n; ++j) padded.push_back(CMatrix::Identity(n, n));
    double db = mixed_disc_bruteforce(padded).value;
    mixed.observe(std::abs(dw - db) / comparison_scale(dw, db), i);
  }
}

// --- suite: identities ------------------------------------------------------

void suite_identities(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 100;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker p_row(out, "e_k trace identity gap / scale", 1e-9 * tf);
  Tracker d_row(out, "leave-one-out trace identity gap / scale", 1e-9 * tf);
  Tracker g_row(out, "leave-two-out trace identity gap / scale", 1e-9 * tf);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    int k = cfg.k > 0 ? std::clamp(cfg.k, 1, n) : 1 + rng.uniform_int(n);
    RVector lambdas(n);
    for (int j = 0; j < n; ++j) lambdas[j] = 1.5 * rng.gaussian();
    CMatrix a = gaussian_matrix(rng, n, n);
    CMatrix b = gaussian_matrix(rng, n, n);
    IdentityGaps gaps = verify_identities(a, b, lambdas, k);

    SymmetricForms forms = symmetric_forms(lambdas, k);
    double p_ref = std::abs(forms.p);
    double d_ref = 0.0, g_ref = 0.0;
    for (int r = 0; r < n; ++r) {
      d_ref += std::abs(a(r, r)) * std::abs(forms.d[r]);
      for (int s = 0; s < n; ++s) {
        g_ref += (std::abs(a(r, r) * b(s, s)) + std::abs(a(s, r) * b(r, s))) *
                 std::abs(forms.g(r, s));
      }
    }
    p_row.observe(gaps.p_gap / std::max(1.0, p_ref), i);
    d_row.observe(gaps.d_gap / std::max(1.0, d_ref), i);
    g_row.observe(gaps.g_gap / std::max(1.0, g_ref), i);
  }
}

// --- suite: af ---------------------------------------------------------------

void suite_af(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 1000;
  int eq_count = std::max(count / 10, 1);
  double tf = tol_factor(cfg);
  out.instances = count + eq_count;
  Tracker gen(out, "negated Alexandrov-Fenchel gap / scale", 1e-9 * tf);
  Tracker eq(out, "absolute AF gap on proportional pairs / scale", 1e-10 * tf);

  auto unit_pd = [](Rng& rng, int n) {
    HermitianMatrix h{CMatrix(random_pd(rng, n))};
    return h.scaled(1.0 / h.trace());
  };
  auto disc = [](const HermitianMatrix& x, const HermitianMatrix& y,
                 const std::vector<HermitianMatrix>& rest) {
    std::vector<CMatrix> args{x.mat(), y.mat()};
    for (const auto& r : rest) args.push_back(r.mat());
    return mixed_disc_bruteforce(args).value;
  };

  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    HermitianMatrix a = unit_pd(rng, n);
    HermitianMatrix b = unit_pd(rng, n);
    std::vector<HermitianMatrix> rest;
    for (int j = 0; j + 2 < n; ++j) rest.push_back(unit_pd(rng, n));
    double gap = af_gap(a, b, rest);
    double dab = disc(a, b, rest);
    double daa = disc(a, a, rest);
    double dbb = disc(b, b, rest);
    double scale = std::max({dab * dab, std::abs(daa * dbb), 1e-300});
    gen.observe(-gap / scale, i);
  }
  for (int i = 0; i < eq_count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i, 1);
    int n = pick_n(cfg, rng, 2, 6);
    HermitianMatrix a = unit_pd(rng, n);
    HermitianMatrix b = a.scaled(0.3 + 2.7 * rng.uniform());
    std::vector<HermitianMatrix> rest;
    for (int j = 0; j + 2 < n; ++j) rest.push_back(unit_pd(rng, n));
    double gap = af_gap(a, b, rest);
    double dab = disc(a, b, rest);
    double scale = std::max(dab * dab, 1e-300);
    eq.observe(std::abs(gap) / scale, i);
  }
}

// --- suite: lieb-chord -------------------------------------------------------

void suite_lieb_chord(const SuiteConfig& cfg, SuiteResult& out) {
  int chords = cfg.instances > 0 ? cfg.instances : 500;
  int curvature = std::max(chords * 2 / 5, 1);
  double tf = tol_factor(cfg);
  out.instances = chords + curvature;
  Tracker root_row(out, "negated chord gap / scale (root form)", 1e-8 * tf);
  Tracker log_row(out, "negated chord gap / scale (log form)", 1e-8 * tf);
  Tracker curv(out, "second directional difference / scale", 1e-6 * tf);

  for (int i = 0; i < chords; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    int k = cfg.k > 0 ? std::clamp(cfg.k, 1, n) : 1 + rng.uniform_int(n);
    ObjectiveForm form = i % 2 ? ObjectiveForm::log : ObjectiveForm::root;
    ObjectiveSpec spec{hermitian_unchecked(random_hermitian(rng, n) * 1.5), k,
                       form};
    HermitianMatrix a1 = rand_pd_spectrum(rng, n, 1e-2, 1e1);
    HermitianMatrix a2 = rand_pd_spectrum(rng, n, 1e-2, 1e1);
    double tau = 0.05 + 0.9 * rng.uniform();
    ChordCertificate cert = chord_gap(spec, a1, a2, tau);
    double scale = comparison_scale(cert.lhs, cert.rhs);
    (form == ObjectiveForm::root ? root_row : log_row)
        .observe(-cert.gap / scale, i);
  }
  for (int i = 0; i < curvature; ++i) {
    Rng rng = Rng::derive(cfg.seed, i, 1);
    int n = pick_n(cfg, rng, 2, 6);
    int k = cfg.k > 0 ? std::clamp(cfg.k, 1, n) : 1 + rng.uniform_int(n);
    ObjectiveForm form = i % 2 ? ObjectiveForm::log : ObjectiveForm::root;
    ObjectiveSpec spec{hermitian_unchecked(random_hermitian(rng, n) * 1.5), k,
                       form};
    HermitianMatrix a = rand_pd_spectrum(rng, n, 0.5, 2.0);
    HermitianMatrix c = hermitian_unchecked(random_hermitian_unit(rng, n));
    double d2 = second_directional_derivative(spec, a, c, 1e-2);
    double scale = std::max(std::abs(objective(spec, a)), 1.0);
    curv.observe(d2 / scale, i);
  }
}

// --- suite: lieb-lemma -------------------------------------------------------

void suite_lieb_lemma(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 300;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker lieb(out, "Lieb lemma gap", 1e-8 * tf);
  Tracker trace_row(out, "wedge trace inequality gap", 1e-8 * tf);
  Tracker reduction(out, "k=1 reduction mismatch / scale", 1e-10 * tf);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 5);
    int k = cfg.k > 0 ? std::clamp(cfg.k, 1, std::min(n, 3))
                      : 1 + rng.uniform_int(std::min(n, 3));
    HermitianMatrix a = rand_pd_spectrum(rng, n, 0.5, 2.0);
    HermitianMatrix c = hermitian_unchecked(random_hermitian_unit(rng, n));
    HermitianMatrix b = [&] {
      if (i % 3 == 0) {
        HermitianMatrix raw = hermitian_unchecked(
            random_psd_rank_deficient(rng, n, 1 + rng.uniform_int(n - 1)));
        return raw.scaled(1.0 / std::max(raw.norm(), 1.0));
      }
      return rand_pd_spectrum(rng, n, 1e-2, 1.0);
    }();

    double lgap = lieb_lemma_gap(a, c, b);
    lieb.observe(lgap, i);
    trace_row.observe(trace_ineq_gap(a, b, c, k), i);
    double t1 = trace_ineq_gap(a, b, c, 1);
    reduction.observe(std::abs(t1 - lgap) /
                          std::max({1.0, std::abs(lgap), std::abs(t1)}),
                      i);
  }
}

// --- suite: operators --------------------------------------------------------

void suite_operators(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 100;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker tq(out, "T eigenbasis vs quadrature relative error", 1e-6 * tf);
  Tracker rq(out, "R eigenbasis vs quadrature relative error", 1e-6 * tf);
  Tracker tfd(out, "T vs finite difference of log, relative", 1e-5 * tf);
  Tracker rfd(out, "R vs finite difference of T, relative", 1e-5 * tf);
  Tracker efd(out, "exp derivative vs finite difference, relative", 1e-5 * tf);
  Tracker ifd(out, "inverse derivative vs finite difference, relative",
              1e-5 * tf);
  const double h = 1e-4;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    HermitianMatrix c = hermitian_unchecked(random_hermitian_unit(rng, n));

    HermitianMatrix wide = rand_pd_spectrum(rng, n, 1e-2, 1e2);
    HermitianMatrix t_dd = t_operator(wide, c);
    HermitianMatrix r_dd = r_operator(wide, c);
    tq.observe((t_dd - t_operator_quadrature(wide, c)).norm() /
                   std::max(t_dd.norm(), 1e-300),
               i);
    rq.observe((r_dd - r_operator_quadrature(wide, c)).norm() /
                   std::max(r_dd.norm(), 1e-300),
               i);

    HermitianMatrix tame = rand_pd_spectrum(rng, n, 0.5, 2.0);
    CMatrix fd_log = (matrix_log(tame + c.scaled(h)).mat() -
                      matrix_log(tame - c.scaled(h)).mat()) /
                     (2.0 * h);
    HermitianMatrix t_ref = t_operator(tame, c);
    tfd.observe((fd_log - t_ref.mat()).norm() / std::max(t_ref.norm(), 1e-300),
                i);

    CMatrix fd_t = (t_operator(tame + c.scaled(h), c).mat() -
                    t_operator(tame - c.scaled(h), c).mat()) /
                   (2.0 * h);
    HermitianMatrix r_ref = r_operator(tame, c);
    rfd.observe((fd_t + r_ref.mat()).norm() / std::max(r_ref.norm(), 1e-300),
                i);

    HermitianMatrix g = hermitian_unchecked(random_hermitian_unit(rng, n) * 2.0);
    CMatrix fd_exp = (matrix_exp(g + c.scaled(h)).mat() -
                      matrix_exp(g - c.scaled(h)).mat()) /
                     (2.0 * h);
    HermitianMatrix e_ref = exp_derivative(g, c);
    efd.observe((fd_exp - e_ref.mat()).norm() / std::max(e_ref.norm(), 1e-300),
                i);

    CMatrix fd_inv = (matrix_inverse(tame + c.scaled(h)).mat() -
                      matrix_inverse(tame - c.scaled(h)).mat()) /
                     (2.0 * h);
    HermitianMatrix i_ref = inverse_derivative(tame, c);
    ifd.observe((fd_inv - i_ref.mat()).norm() / std::max(i_ref.norm(), 1e-300),
                i);
  }
}

// --- suite: master -------------------------------------------------------

EnsembleSpec random_small_ensemble(Rng& rng, int n) {
  EnsembleSpec spec;
  spec.n = n;
  int m = 1 + rng.uniform_int(4);
  for (int s = 0; s < m; ++s) {
    int atoms = 1 + rng.uniform_int(3);
    std::vector<double> w(atoms);
    double total = 0.0;
    for (int j = 0; j < atoms; ++j) {
      w[j] = 0.1 + rng.uniform();
      total += w[j];
    }
    FiniteSupportMatrix summand;
    for (int j = 0; j < atoms; ++j) {
      summand.atoms.push_back(
          {w[j] / total, hermitian_unchecked(random_hermitian_unit(rng, n))});
    }
    spec.summands.push_back(std::move(summand));
  }
  validate_ensemble(spec);
  return spec;
}

void suite_master(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 50;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker jensen_top(out, "top-k spectral sum above exact mean / scale",
                     1e-9 * tf);
  Tracker upper_row(out, "exact mean above master upper bound / scale",
                    1e-9 * tf);
  Tracker jensen_bot(out, "exact mean above bottom-k spectral sum / scale",
                     1e-9 * tf);
  Tracker lower_row(out, "master lower bound above exact mean / scale",
                    1e-9 * tf);
  Tracker tail_row(out, "exact tail probability above tail bound", 1e-9 * tf);
  for (int e = 0; e < count; ++e) {
    Rng rng = Rng::derive(cfg.seed, e);
    int n = pick_n(cfg, rng, 2, 5);
    EnsembleSpec spec = random_small_ensemble(rng, n);
    ThetaGrid grid = default_theta_grid(spec);
    RVector mu = expectation_spectrum(spec);

    std::vector<ExhaustiveStats> exact;
    for (int k = 1; k <= n; ++k) {
      exact.push_back(exhaustive_expectations(spec, k));
      const ExhaustiveStats& ex = exact.back();
      BoundReport up = master_expectation_bound(spec, k, grid, Branch::top);
      BoundReport low = master_expectation_bound(spec, k, grid, Branch::bottom);
      double mt = top_k_sum(mu, k);
      double mb = bottom_k_sum(mu, k);
      double s_top = std::max({1.0, std::abs(mt), std::abs(ex.top_mean),
                               std::abs(up.bound)});
      double s_bot = std::max({1.0, std::abs(mb), std::abs(ex.bot_mean),
                               std::abs(low.bound)});
      jensen_top.observe((mt - ex.top_mean) / s_top, e);
      upper_row.observe((ex.top_mean - up.bound) / s_top, e);
      jensen_bot.observe((ex.bot_mean - mb) / s_bot, e);
      lower_row.observe((low.bound - ex.bot_mean) / s_bot, e);
    }

    int kt = 1 + (e % n);
    const ExhaustiveStats& ex = exact[kt - 1];
    double top_lo = ex.top_dist.front().first;
    double top_hi = ex.top_dist.back().first;
    double bot_lo = ex.bot_dist.front().first;
    double bot_hi = ex.bot_dist.back().first;
    for (int j = 0; j < 20; ++j) {
      double frac = j / 19.0;
      double t_top = top_lo + (top_hi - top_lo) * frac;
      BoundReport tb = master_tail_bound(spec, kt, t_top, grid, Branch::top);
      tail_row.observe(ex.top_tail_ge(t_top) - *tb.bound_clipped, e);
      double t_bot = bot_lo + (bot_hi - bot_lo) * frac;
      BoundReport bb = master_tail_bound(spec, kt, t_bot, grid, Branch::bottom);
      tail_row.observe(ex.bot_tail_le(t_bot) - *bb.bound_clipped, e);
    }
  }
}

// --- suite: tropp ---------------------------------------------------------

EnsembleSpec random_bounded_psd_ensemble(Rng& rng, int n, double cbound) {
  EnsembleSpec spec;
  spec.n = n;
  spec.c = cbound;
  int m = 1 + rng.uniform_int(3);
  for (int s = 0; s < m; ++s) {
    int atoms = 1 + rng.uniform_int(3);
    std::vector<double> w(atoms);
    double total = 0.0;
    for (int j = 0; j < atoms; ++j) {
      w[j] = 0.1 + rng.uniform();
      total += w[j];
    }
    FiniteSupportMatrix summand;
    for (int j = 0; j < atoms; ++j) {
      HermitianMatrix base{CMatrix(random_pd(rng, n))};
      double lmax = classify_cone(base).lambda_max;
      double target = cbound * (0.3 + 0.7 * rng.uniform());
      summand.atoms.push_back({w[j] / total, base.scaled(target / lmax)});
    }
    spec.summands.push_back(std::move(summand));
  }
  validate_ensemble(spec);
  return spec;
}

void suite_tropp(const SuiteConfig& cfg, SuiteResult& out) {
  int count = cfg.instances > 0 ? cfg.instances : 20;
  double tf = tol_factor(cfg);
  out.instances = count;
  Tracker exp_curve(out, "k=1 expectation curve vs direct formula, relative",
                    1e-12 * tf);
  Tracker tail_closed(out, "k=1 tail bound vs direct formula, relative",
                      1e-12 * tf);
  Tracker theta_star(out, "closed-form optimizer outside curve bracket",
                     0.0);
  Tracker mgf_row(out, "MGF dominance violation / scale", 1e-10 * tf);

  auto bracket_miss = [](const BoundReport& report) {
    int best = -1;
    for (std::size_t idx = 0; idx < report.curve.size(); ++idx) {
      const CurvePoint& pt = report.curve[idx];
      if (!pt.valid) continue;
      if (best < 0 || pt.value < report.curve[best].value) best = int(idx);
    }
    if (best < 0) return 1.0;
    int last = int(report.curve.size()) - 1;
    double lo = std::abs(report.curve[std::max(best - 1, 0)].theta);
    double hi = std::abs(report.curve[std::min(best + 1, last)].theta);
    if (lo > hi) std::swap(lo, hi);
    double ts = std::abs(report.best_theta);
    return ts >= lo * (1.0 - 1e-12) && ts <= hi * (1.0 + 1e-12) ? 0.0 : 1.0;
  };

  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(cfg.seed, i);
    int n = pick_n(cfg, rng, 2, 6);
    double cbound = 0.5 + 1.5 * rng.uniform();
    EnsembleSpec spec = random_bounded_psd_ensemble(rng, n, cbound);
    ThetaGrid grid = default_theta_grid(spec);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(expectation_matrix(spec).mat());
    double lmax = es.eigenvalues().maxCoeff();
    double lmin = es.eigenvalues().minCoeff();
    double logn = std::log(double(n));

    auto [up, low] = chernoff_expectation_bounds(spec, 1, grid);
    for (const CurvePoint& pt : up.curve) {
      if (!pt.valid) continue;
      double m = pt.theta;
      double direct = std::expm1(m) / m * lmax + cbound * logn / m;
      exp_curve.observe(std::abs(pt.value - direct) /
                            std::max(std::abs(direct), 1e-300),
                        i);
    }
    for (const CurvePoint& pt : low.curve) {
      if (!pt.valid) continue;
      double m = pt.theta;
      double direct = -std::expm1(-m) / m * lmin - cbound * logn / m;
      exp_curve.observe(std::abs(pt.value - direct) /
                            std::max(std::abs(direct), 1e-300),
                        i);
    }

    double eps = 0.05 + 0.85 * rng.uniform();
    auto [tup, tlow] = chernoff_tail_bounds(spec, 1, eps);
    double direct_up =
        n * std::exp(lmax / cbound * (eps - (1.0 + eps) * std::log1p(eps)));
    double direct_low =
        n * std::exp(lmin / cbound * (-eps - (1.0 - eps) * std::log1p(-eps)));
    tail_closed.observe(std::abs(tup.bound - direct_up) /
                            std::max(direct_up, 1e-300),
                        i);
    tail_closed.observe(std::abs(tlow.bound - direct_low) /
                            std::max(direct_low, 1e-300),
                        i);
    theta_star.observe(bracket_miss(tup), i);
    theta_star.observe(bracket_miss(tlow), i);

    for (int j = 0; j < 3; ++j) {
      double theta = (0.01 + 5.0 * rng.uniform()) / cbound;
      const FiniteSupportMatrix& summand =
          spec.summands[rng.uniform_int(int(spec.summands.size()))];
      double g = std::expm1(theta * cbound) / cbound;
      double scale = std::max(1.0, g * summand.mean().norm());
      mgf_row.observe(-mgf_dominance_gap(summand, theta, cbound) / scale, i);
    }
  }
}

// --- suite: er-sim ----------------------------------------------------------

int count_bit_mismatches(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size()) return int(std::max(a.size(), b.size()));
  int bad = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) ++bad;
  }
  return bad;
}

int stats_mismatches(const SampleStats& x, const SampleStats& y) {
  int bad = count_bit_mismatches(x.top_mean, y.top_mean) +
            count_bit_mismatches(x.top_stderr, y.top_stderr) +
            count_bit_mismatches(x.bot_mean, y.bot_mean) +
            count_bit_mismatches(x.bot_stderr, y.bot_stderr);
  if (x.tails.size() != y.tails.size()) return bad + 1;
  for (std::size_t i = 0; i < x.tails.size(); ++i) {
    if (std::memcmp(&x.tails[i].frequency, &y.tails[i].frequency,
                    sizeof(double)) != 0) {
      ++bad;
    }
  }
  return bad;
}

void suite_er_sim(const SuiteConfig& cfg, SuiteResult& out) {
  int samples = cfg.samples > 0 ? cfg.samples : 20000;
  out.instances = samples;
  EnsembleSpec spec = er_laplacian_ensemble(8, 0.5, 1.0);
  ThetaGrid grid = default_theta_grid(spec);
  std::vector<TailQuery> tails;
  for (int k = 1; k <= 3; ++k) {
    tails.push_back({k, true, 4.0 * k});
    tails.push_back({k, false, 2.0 * k});
  }
  SampleStats base = sample_sum(spec, cfg.seed, samples, tails, 0);

  Tracker top_row(out, "MC top-k mean above Chernoff upper bound", 0.0);
  Tracker bot_row(out, "MC bottom-k mean below Chernoff lower bound", 0.0);
  for (int k = 1; k <= 3; ++k) {
    auto [up, low] = chernoff_expectation_bounds(spec, k, grid);
    top_row.observe(base.top_mean[k - 1] - up.bound, k);
    bot_row.observe(low.bound - base.bot_mean[k - 1], k);
  }

  Tracker det_row(out, "cross-worker bitwise mismatches", 0.0);
  SampleStats w1 = sample_sum(spec, cfg.seed, samples, tails, 1);
  SampleStats w3 = sample_sum(spec, cfg.seed, samples, tails, 3);
  det_row.observe(double(stats_mismatches(base, w1)), 1);
  det_row.observe(double(stats_mismatches(base, w3)), 3);
}

// --- suite: sharpness -------------------------------------------------------

void suite_sharpness(const SuiteConfig& cfg, SuiteResult& out) {
  double tf = tol_factor(cfg);
  out.instances = 0;
  Tracker logs(out, "ln C(n,k) minus ln falling factorial", -1e-9 * tf);
  for (int n = 2; n <= 12; ++n) {
    for (int k = 2; k <= n; ++k) {
      logs.observe(log_binomial(n, k) - log_falling_factorial(n, k),
                   100 * n + k);
      ++out.instances;
    }
  }

  EnsembleSpec spec = er_laplacian_ensemble(8, 0.5, 1.0);
  ThetaGrid grid = default_theta_grid(spec);
  Tracker eq1(out, "k=1 Chernoff vs subspace relative difference", 1e-12 * tf);
  Tracker ord_up(out, "Chernoff upper minus subspace upper (k >= 2)", 0.0);
  Tracker ord_low(out, "subspace lower minus Chernoff lower (k >= 2)", 0.0);
  for (int k = 1; k <= 3; ++k) {
    auto [cu, cl] = chernoff_expectation_bounds(spec, k, grid);
    auto [su, sl] = subspace_comparison_bounds(spec, k, grid);
    if (k == 1) {
      eq1.observe(std::abs(cu.bound - su.bound) /
                      std::max(1.0, std::abs(cu.bound)),
                  k);
      eq1.observe(std::abs(cl.bound - sl.bound) /
                      std::max(1.0, std::abs(cl.bound)),
                  k);
    } else {
      ord_up.observe(cu.bound - su.bound, k);
      ord_low.observe(sl.bound - cl.bound, k);
    }
  }
}

// --- registry ---------------------------------------------------------------

using SuiteFn = void (*)(const SuiteConfig&, SuiteResult&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"ktrace-triple", suite_ktrace_triple},
      {"wedge", suite_wedge},
      {"identities", suite_identities},
      {"af", suite_af},
      {"lieb-chord", suite_lieb_chord},
      {"lieb-lemma", suite_lieb_lemma},
      {"operators", suite_operators},
      {"master", suite_master},
      {"tropp", suite_tropp},
      {"er-sim", suite_er_sim},
      {"sharpness", suite_sharpness},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& config) {
  for (const auto& [suite, fn] : registry()) {
    if (suite != name) continue;
    SuiteResult out;
    out.name = name;
    out.seed = config.seed;
    auto start = std::chrono::steady_clock::now();
    fn(config, out);
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    out.passed = std::all_of(out.rows.begin(), out.rows.end(),
                             [](const CheckRow& row) { return row.passed; });
    return out;
  }
  std::string known;
  for (const auto& name_known : suite_names()) {
    known += known.empty() ? name_known : ", " + name_known;
  }
  throw ArgumentError("unknown suite '" + name + "' (available: " + known +
                      ")");
}

std::vector<SuiteResult> run_all_suites(const SuiteConfig& config) {
  std::vector<SuiteResult> results;
  for (const auto& name : suite_names()) {
    results.push_back(run_suite(name, config));
  }
  return results;
}

}  // namespace ktrace
