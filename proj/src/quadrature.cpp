#include "ktrace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ktrace/errors.hpp"

namespace ktrace {

namespace {

// 15-point Kronrod abscissae (positive half) and weights, plus the embedded
// 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  double center = 0.5 * (a + b);
  double hlgth = 0.5 * (b - a);
  double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    double dx = hlgth * kXgk[j];
    double f1 = f(center - dx);
    double f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
  }
  resasc *= std::abs(hlgth);
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  return Segment{a, b, resk * hlgth, err};
}

struct MatrixSegment {
  double a, b;
  CMatrix value;
  double error;
};

MatrixSegment gk15_matrix(const std::function<CMatrix(double)>& f, double a,
                          double b) {
  double center = 0.5 * (a + b);
  double hlgth = 0.5 * (b - a);
  CMatrix fc = f(center);
  CMatrix resg = fc * kWg[3];
  CMatrix resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    double dx = hlgth * kXgk[j];
    CMatrix f1 = f(center - dx);
    CMatrix f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  double err = ((resk - resg) * hlgth).norm();
  return MatrixSegment{a, b, resk * hlgth, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    double abs_tol, int max_segments) {
  std::vector<Segment> segs;
  segs.push_back(gk15(f, a, b));
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.error;
    }
    double goal = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= goal) {
      return QuadratureResult{total, err, int(segs.size())};
    }
    if (int(segs.size()) >= max_segments) {
      throw SolverError("integrate_adaptive: no convergence after " +
                        std::to_string(segs.size()) + " segments, error " +
                        std::to_string(err));
    }
    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const Segment& x, const Segment& y) { return x.error < y.error; });
    Segment old = *worst;
    double mid = 0.5 * (old.a + old.b);
    *worst = gk15(f, old.a, mid);
    segs.push_back(gk15(f, mid, old.b));
  }
}

CMatrix integrate_adaptive_matrix(const std::function<CMatrix(double)>& f,
                                  double a, double b, double rel_tol,
                                  double abs_tol, int max_segments) {
  std::vector<MatrixSegment> segs;
  segs.push_back(gk15_matrix(f, a, b));
  for (;;) {
    CMatrix total = segs[0].value;
    double err = segs[0].error;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
    }
    double goal = std::max(abs_tol, rel_tol * total.norm());
    if (err <= goal) return total;
    if (int(segs.size()) >= max_segments) {
      throw SolverError("integrate_adaptive_matrix: no convergence after " +
                        std::to_string(segs.size()) + " segments");
    }
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const MatrixSegment& x,
                                     const MatrixSegment& y) {
                                    return x.error < y.error;
                                  });
    MatrixSegment old = *worst;
    double mid = 0.5 * (old.a + old.b);
    *worst = gk15_matrix(f, old.a, mid);
    segs.push_back(gk15_matrix(f, mid, old.b));
  }
}

const GaussLegendreRule& gauss_legendre_unit(int n) {
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  auto [pos, inserted] = cache.emplace(n, std::move(rule));
  (void)inserted;
  return pos->second;
}

double integrate_unit_doubling(const std::function<double(double)>& f,
                               double rel_tol) {
  double prev = 0.0;
  bool have_prev = false;
  for (int n : {32, 64, 128, 256}) {
    const auto& rule = gauss_legendre_unit(n);
    CompensatedSum acc;
    for (int i = 0; i < n; ++i) acc.add(rule.weights[i] * f(rule.nodes[i]));
    double cur = acc.value();
    if (have_prev &&
        std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1.0)) {
      return cur;
    }
    prev = cur;
    have_prev = true;
  }
  return prev;
}

}  // namespace ktrace
