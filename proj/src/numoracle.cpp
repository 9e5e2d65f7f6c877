#include "asymgen/numoracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace asymgen {

// ---- quadrature -----------------------------------------------------------------

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= h;
  gauss *= h;
  if (!std::isfinite(kronrod)) throw NoConvergence("integrand is not finite on the interval");
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b, double rtol, double atol,
                         int max_subdivisions) {
  if (a == b) return {};
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  double value = first.value;
  double error = first.error;
  int subdivisions = 0;
  while (error > std::max(atol, rtol * std::abs(value))) {
    if (subdivisions >= max_subdivisions) throw NoConvergence("quadrature subdivision cap reached");
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval exhausted at machine precision; keep its estimate.
      heap.push({worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed accumulated cancellation error.
  double total = 0.0;
  double total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  return {total, total_err, subdivisions};
}

QuadResult adaptive_quad_split(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breaks, double rtol) {
  std::vector<double> pts{a};
  for (double p : breaks) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  QuadResult out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadResult r = adaptive_quad(f, pts[i], pts[i + 1], rtol);
    out.value += r.value;
    out.err_estimate += r.err_estimate;
    out.subdivisions += r.subdivisions;
  }
  return out;
}

// ---- ODEs --------------------------------------------------------------------------

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeState deriv(const ThirdOrderRhs& rhs, double x, const OdeState& y) { return {y[1], y[2], rhs(x, y[0], y[1], y[2])}; }

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (const auto& [w, k] : terms) {
    for (int i = 0; i < 3; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

bool finite(const OdeState& s) { return std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2]); }

}  // namespace

OdeState OdeTrace::at(double x) const {
  if (xs.empty()) return {};
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const std::size_t i = j - 1;
  const double h = xs[j] - xs[i];
  const double t = (x - xs[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  OdeState out;
  for (int k = 0; k < 3; ++k) {
    out[k] = h00 * ys[i][k] + h10 * h * dys[i][k] + h01 * ys[j][k] + h11 * h * dys[j][k];
  }
  return out;
}

OdeTrace integrate_ode(const ThirdOrderRhs& rhs, const OdeState& y0, double x_max, const OdeOptions& opts) {
  OdeTrace trace;
  double x = 0.0;
  OdeState y = y0;
  OdeState k1 = deriv(rhs, x, y);
  if (!finite(k1)) throw StiffFailure("right-hand side is not finite at the origin");
  trace.xs.push_back(x);
  trace.ys.push_back(y);
  trace.dys.push_back(k1);

  double h = 1e-3;
  double h_max = x_max;
  for (int step = 0; step < opts.max_steps; ++step) {
    if (x >= x_max) return trace;
    h = std::min({h, h_max, x_max - x});
    const double h_min = 1e-14 * std::max(1.0, std::abs(x));
    if (h < h_min) {
      // A derivative singularity of fractional order stalls the step size
      // before y' or y'' reach their thresholds; y''' already diverges there.
      const double d = std::max(std::abs(y[1]), std::abs(y[2]));
      if (d > 1e6 || std::abs(k1[2]) > 1e8) {
        trace.blowup_x = x;
        trace.derivative_blowup = std::abs(y[0]) < 1e3;
        return trace;
      }
      throw StiffFailure("step size underflow at x = " + std::to_string(x));
    }

    const OdeState k2 = deriv(rhs, x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const OdeState k3 = deriv(rhs, x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const OdeState k4 = deriv(rhs, x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const OdeState k5 = deriv(rhs, x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const OdeState k6 =
        deriv(rhs, x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const OdeState y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const OdeState k7 = deriv(rhs, x + h, y_new);

    double err = 0.0;
    bool ok = finite(y_new) && finite(k7);
    if (ok) {
      for (int i = 0; i < 3; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      ok = std::isfinite(err);
    }
    if (!ok) {
      h *= 0.25;
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
      continue;
    }

    const bool crossed = std::abs(y_new[0]) > opts.blow_threshold || std::abs(y_new[1]) > opts.deriv_threshold ||
                         std::abs(y_new[2]) > opts.deriv_threshold;
    if (crossed && h > opts.locate_tol) {
      // Bisect the step until the crossing is located to locate_tol.
      h_max = 0.5 * h;
      h = h_max;
      continue;
    }

    x += h;
    y = y_new;
    k1 = k7;
    trace.xs.push_back(x);
    trace.ys.push_back(y);
    trace.dys.push_back(k1);
    if (crossed) {
      trace.blowup_x = x;
      trace.derivative_blowup = std::abs(y[0]) < 1e3;
      return trace;
    }
    const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
    h *= std::max(0.2, grow);
  }
  throw NoConvergence("step budget exhausted");
}

// ---- polynomials -----------------------------------------------------------------------

namespace {

std::pair<Complex, Complex> horner(const std::vector<Complex>& c, Complex x) {
  Complex p = c.back();
  Complex dp = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[k];
  }
  return {p, dp};
}

}  // namespace

std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs) {
  std::vector<Complex> c = coeffs;
  while (c.size() > 1 && c.back() == Complex(0.0)) c.pop_back();
  std::size_t zeros = 0;
  while (zeros + 1 < c.size() && c[zeros] == Complex(0.0)) ++zeros;
  std::vector<Complex> out(zeros, Complex(0.0));
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return out;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  for (int i = 0; i < n; ++i) {
    Complex z = solver.eigenvalues()[i];
    for (int it = 0; it < 5; ++it) {
      const auto [p, dp] = horner(c, z);
      if (dp == Complex(0.0)) break;
      const Complex z2 = z - p / dp;
      if (std::abs(horner(c, z2).first) >= std::abs(p)) break;
      z = z2;
    }
    out.push_back(z);
  }
  return out;
}

std::vector<int> greedy_match(const std::vector<Complex>& analytic, const std::vector<Complex>& numeric,
                              double rel_tol) {
  struct Pair {
    double d;
    int i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      pairs.push_back({relative_error(analytic[i], numeric[j]), static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  std::vector<int> match(analytic.size(), -1);
  std::vector<bool> used(numeric.size(), false);
  for (const Pair& p : pairs) {
    if (p.d > rel_tol) break;
    if (match[static_cast<std::size_t>(p.i)] != -1 || used[static_cast<std::size_t>(p.j)]) continue;
    match[static_cast<std::size_t>(p.i)] = p.j;
    used[static_cast<std::size_t>(p.j)] = true;
  }
  return match;
}

// ---- validation reports -------------------------------------------------------------------

double relative_error(Complex analytic, Complex numeric) {
  const double diff = std::abs(analytic - numeric);
  const double mag = std::abs(numeric);
  if (!std::isfinite(diff)) return std::numeric_limits<double>::infinity();
  return mag > 0.0 ? diff / mag : diff;
}

void ValidationReport::add(std::string regime, double probe, Complex analytic, Complex numeric) {
  entries.push_back({std::move(regime), probe, analytic, numeric, relative_error(analytic, numeric)});
}

void ValidationReport::finalize() {
  pass = !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const ValidationEntry& e) { return e.rel_error < kGate; });
}

double ValidationReport::max_error() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.rel_error);
  return m;
}

}  // namespace asymgen
