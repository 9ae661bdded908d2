#include "platoonlab/impulse_response.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "platoonlab/errors.hpp"
#include "platoonlab/string_stability.hpp"

namespace platoonlab {

ScaledTf time_scale(const ControllerSpec& spec, double tau, double tau0) {
  spec.validate();
  if (spec.arch != Architecture::PF) throw Error("time_scale: spec must be pf");
  if (!(tau0 > 0.0)) throw GainRangeError("time_scale: tau0 must be positive");
  if (!(tau >= 0.0) || !(tau <= tau0)) throw GainRangeError("time_scale: tau must lie in [0, tau0]");
  const GainTap& t = spec.taps[0];
  ScaledTf s;
  s.ka = t.ka;
  s.kp = t.kp * tau0 * tau0;
  s.kv = t.kv * tau0;
  s.hw = spec.headway / tau0;
  s.tau = tau / tau0;
  return s;
}

ControllerSpec unscale(const ScaledTf& scaled, double tau0, double d) {
  if (!(tau0 > 0.0)) throw GainRangeError("unscale: tau0 must be positive");
  return ControllerSpec::pf(scaled.kp / (tau0 * tau0), scaled.kv / tau0, scaled.ka,
                            scaled.hw * tau0, d);
}

RationalTf scaled_error_tf(const ScaledTf& s) {
  RationalTf tf;
  tf.num = {s.kp, s.kv, s.ka};
  tf.den = {s.kp, s.kv + s.kp * s.hw, 1.0, s.tau};
  tf.trim();
  tf.validate();
  return tf;
}

std::optional<CubicPoles> cubic_poles(std::span<const double> den) {
  std::vector<double> c(den.begin(), den.end());
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.size() != 4) throw Error("cubic_poles: degree-3 denominator required");
  const double a = c[3], b = c[2], c1 = c[1], d = c[0];

  const double disc = 18.0 * a * b * c1 * d - 4.0 * b * b * b * d + b * b * c1 * c1 -
                      4.0 * a * c1 * c1 * c1 - 27.0 * a * a * d * d;
  if (!(disc > 0.0)) return std::nullopt;  // complex pair or repeated root

  // Depressed cubic t^3 + pt + q, roots via the trigonometric form.
  const double p = (3.0 * a * c1 - b * b) / (3.0 * a * a);
  const double q = (2.0 * b * b * b - 9.0 * a * b * c1 + 27.0 * a * a * d) / (27.0 * a * a * a);
  if (!(p < 0.0)) return std::nullopt;
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;

  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k)
    roots[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - b / (3.0 * a);

  for (double& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((a * r + b) * r + c1) * r + d;
      const double fp = (3.0 * a * r + 2.0 * b) * r + c1;
      if (fp != 0.0) r -= f / fp;
    }
  }
  std::sort(roots.begin(), roots.end());
  const double span = std::abs(roots[2] - roots[0]);
  if (!(roots[1] - roots[0] > 1e-12 * span) || !(roots[2] - roots[1] > 1e-12 * span))
    return std::nullopt;
  return CubicPoles{-roots[2], -roots[1], -roots[0]};
}

namespace {

// Real distinct poles of the zero-lag (degree-2) denominator; p1 < p2.
std::optional<std::pair<double, double>> quadratic_poles(const ScaledTf& s) {
  const double b = s.kv + s.kp * s.hw;
  const double disc = b * b - 4.0 * s.kp;
  if (!(disc > 0.0)) return std::nullopt;
  const double sq = std::sqrt(disc);
  return std::make_pair((b - sq) / 2.0, (b + sq) / 2.0);
}

}  // namespace

std::optional<PoleResidueForm> pole_residue_form(const ScaledTf& s) {
  if (!(s.tau > 0.0)) throw Error("pole_residue_form: positive scaled lag required");
  const RationalTf tf = scaled_error_tf(s);
  const auto poles = cubic_poles(tf.den);
  if (!poles || !(poles->p1 > 0.0)) return std::nullopt;
  const double vel = s.kv + s.kp * s.hw;
  auto residue = [&](double p) {
    const double numerator = s.ka * p * p - s.kv * p + s.kp;
    const double dprime = 3.0 * s.tau * p * p - 2.0 * p + vel;
    return numerator / dprime;
  };
  PoleResidueForm out;
  out.poles = *poles;
  out.c1 = residue(poles->p1);
  out.c2 = residue(poles->p2);
  out.c3 = residue(poles->p3);
  return out;
}

bool nnir_tau_zero(const ScaledTf& s) {
  const auto poles = quadratic_poles(s);
  if (!poles || !(poles->first > 0.0)) return false;
  if (!(s.ka > 0.0) || !(s.ka < 1.0)) return false;
  const double zero_disc = s.kv * s.kv - 4.0 * s.ka * s.kp;
  if (!(zero_disc > 0.0)) return false;
  const double mid = s.hw * s.kp / (1.0 - s.ka);
  return poles->first <= mid && mid <= poles->first + poles->second;
}

std::optional<bool> nnir_tau_positive(const ScaledTf& s) {
  if (!(s.tau > 0.0) || !(s.tau <= 1.0))
    throw Error("nnir_tau_positive: scaled lag must lie in (0, 1]");
  const auto pr = pole_residue_form(s);
  if (!pr) return std::nullopt;
  const double cmax = std::max({std::abs(pr->c1), std::abs(pr->c2), std::abs(pr->c3)});
  const double tol = 1e-14 * cmax;  // absorbs sign flips right at the criterion boundary
  const bool ok = pr->c1 >= -tol && pr->c2 < -tol &&
                  pr->c3 > (pr->poles.p2 - pr->poles.p1) / (pr->poles.p3 - pr->poles.p1) * pr->c2;
  return ok;
}

std::vector<double> default_tau_samples() {
  std::vector<double> out(21);
  for (int i = 0; i <= 20; ++i) out[i] = static_cast<double>(i) / 20.0;
  return out;
}

long RegionScanResult::admissible_count() const {
  long n = 0;
  for (const auto& c : cells)
    if (c.admissible()) ++n;
  return n;
}

namespace {

RegionCell evaluate_region_cell(double ka, double hw, double kp, double kv,
                                std::span<const double> taus) {
  RegionCell cell;
  ScaledTf base{ka, kp, kv, hw, 0.0};
  cell.cond_tau_zero = nnir_tau_zero(base);
  cell.real_distinct = true;
  cell.cond_tau_positive = true;
  for (double tau : taus) {
    ScaledTf s = base;
    s.tau = tau;
    if (tau == 0.0) {
      if (!quadratic_poles(s)) cell.real_distinct = false;
      continue;
    }
    const auto verdict = nnir_tau_positive(s);
    if (!verdict) {
      cell.real_distinct = false;
      cell.cond_tau_positive = false;
    } else if (!*verdict) {
      cell.cond_tau_positive = false;
    }
  }
  return cell;
}

}  // namespace

RegionScanResult region_scan(double ka, double hw_scaled, const RegionGridSpec& grid,
                             std::span<const double> tau_samples, Execution exec) {
  if (grid.n_kp < 0 || grid.n_kv < 0) throw Error("region_scan: negative resolution");
  if (grid.n_kp == 0 || grid.n_kv == 0) return {};  // empty ranges give an empty grid
  if (!(grid.kp_min > 0.0) || !(grid.kp_max >= grid.kp_min) || !(grid.kv_min > 0.0) ||
      !(grid.kv_max >= grid.kv_min))
    throw Error("region_scan: bad gain ranges");

  std::vector<double> defaults;
  if (tau_samples.empty()) {
    defaults = default_tau_samples();
    tau_samples = defaults;
  }
  for (double tau : tau_samples)
    if (!(tau >= 0.0) || !(tau <= 1.0)) throw Error("region_scan: scaled lags must lie in [0, 1]");

  RegionScanResult out;
  out.kp.resize(grid.n_kp);
  out.kv.resize(grid.n_kv);
  auto log_axis = [](std::vector<double>& axis, double lo, double hi) {
    const int n = static_cast<int>(axis.size());
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
      axis[i] = n == 1 ? lo : std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  };
  log_axis(out.kp, grid.kp_min, grid.kp_max);
  log_axis(out.kv, grid.kv_min, grid.kv_max);

  out.cells.resize(static_cast<std::size_t>(grid.n_kp) * grid.n_kv);
  const int total = grid.n_kp * grid.n_kv;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int i = 0; i < total; ++i)
      out.cells[i] =
          evaluate_region_cell(ka, hw_scaled, out.kp[i / grid.n_kv], out.kv[i % grid.n_kv],
                               tau_samples);
  } else {
    for (int i = 0; i < total; ++i)
      out.cells[i] =
          evaluate_region_cell(ka, hw_scaled, out.kp[i / grid.n_kv], out.kv[i % grid.n_kv],
                               tau_samples);
  }
  return out;
}

void write_region_csv(std::ostream& os, const RegionScanResult& result) {
  os << "k_tilde_p,k_tilde_v,cond_tau0,real_distinct,cond_tau_pos\n";
  char buf[96];
  for (std::size_t i = 0; i < result.kp.size(); ++i) {
    for (std::size_t j = 0; j < result.kv.size(); ++j) {
      const RegionCell& c = result.cells[i * result.kv.size() + j];
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%d,%d,%d\n", result.kp[i], result.kv[j],
                    c.cond_tau_zero ? 1 : 0, c.real_distinct ? 1 : 0, c.cond_tau_positive ? 1 : 0);
      os << buf;
    }
  }
}

namespace {

// h(t) = C exp(At) B for the companion realization of a strictly proper
// num/den with monic denominator coefficients d (ascending, d.size() = n).
struct Companion {
  int n = 0;
  std::vector<double> d;  // monic denominator, constant..degree n-1
  std::vector<double> c;  // output row, padded to n

  std::vector<double> deriv(const std::vector<double>& x) const {
    std::vector<double> dx(n);
    for (int i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc -= d[j] * x[j];
    dx[n - 1] = acc;
    return dx;
  }
  double output(const std::vector<double>& x) const {
    double y = 0.0;
    for (int j = 0; j < n; ++j) y += c[j] * x[j];
    return y;
  }
};

// Solves A y = rhs for the companion A (n <= 3), Gaussian elimination.
std::vector<double> solve_companion(const Companion& sys, const std::vector<double>& rhs) {
  const int n = sys.n;
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = 1.0;
  for (int j = 0; j < n; ++j) m[n - 1][j] = -sys.d[j];
  for (int i = 0; i < n; ++i) m[i][n] = rhs[i];
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    std::swap(m[col], m[piv]);
    if (m[col][col] == 0.0) throw Error("impulse_numeric: singular state matrix");
    for (int row = col + 1; row < n; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k <= n; ++k) m[row][k] -= f * m[col][k];
    }
  }
  std::vector<double> y(n);
  for (int i = n - 1; i >= 0; --i) {
    double acc = m[i][n];
    for (int k = i + 1; k < n; ++k) acc -= m[i][k] * y[k];
    y[i] = acc / m[i][i];
  }
  return y;
}

double simpson(const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  std::size_t i = 0;
  while (i + 2 < n) {
    acc += dt / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    i += 2;
  }
  if (i + 1 < n) acc += 0.5 * dt * (y[i] + y[i + 1]);
  return acc;
}

}  // namespace

ImpulseResult impulse_numeric(const RationalTf& tf_in, double t_max, double dt) {
  RationalTf tf = tf_in;
  tf.trim();
  tf.validate();
  if (!(t_max > 0.0) || !(dt > 0.0) || !(dt <= t_max)) throw Error("impulse_numeric: bad time grid");
  if (!is_hurwitz(tf.den)) throw NonHurwitzError("impulse_numeric: denominator is not Hurwitz");

  ImpulseResult out;
  // Split off an impulsive direct term when degrees are equal.
  std::vector<double> num = tf.num;
  if (tf.num_degree() == tf.den_degree()) {
    out.direct_term = tf.num.back() / tf.den.back();
    for (std::size_t i = 0; i < num.size(); ++i) num[i] -= out.direct_term * tf.den[i];
    num.pop_back();
    while (num.size() > 1 && num.back() == 0.0) num.pop_back();
  }

  const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / dt));
  out.t.resize(steps + 1);
  out.h.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out.t[i] = static_cast<double>(i) * dt;

  const int den_deg = tf.den_degree();
  bool analytic = false;
  std::vector<std::pair<double, double>> terms;  // (pole, residue)

  auto residue_at = [&](double p) {
    double nval = 0.0;
    for (auto it = num.rbegin(); it != num.rend(); ++it) nval = nval * (-p) + *it;
    double dprime = 0.0;
    for (int k = den_deg; k >= 1; --k) dprime = dprime * (-p) + static_cast<double>(k) * tf.den[k];
    return nval / dprime;
  };

  if (den_deg == 1) {
    terms = {{tf.den[0] / tf.den[1], 0.0}};
    terms[0].second = num[0] / tf.den[1];
    analytic = true;
  } else if (den_deg == 2) {
    const double b = tf.den[1] / tf.den[2], c0 = tf.den[0] / tf.den[2];
    const double disc = b * b - 4.0 * c0;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      terms = {{(b - sq) / 2.0, 0.0}, {(b + sq) / 2.0, 0.0}};
      for (auto& t : terms) t.second = residue_at(t.first);
      analytic = true;
    }
  } else if (den_deg == 3) {
    if (const auto poles = cubic_poles(tf.den); poles && poles->p1 > 0.0) {
      terms = {{poles->p1, 0.0}, {poles->p2, 0.0}, {poles->p3, 0.0}};
      for (auto& t : terms) t.second = residue_at(t.first);
      analytic = true;
    }
  }

  if (analytic) {
    for (std::size_t i = 0; i <= steps; ++i) {
      double v = 0.0;
      for (const auto& [p, c] : terms) v += c * std::exp(-p * out.t[i]);
      out.h[i] = v;
    }
    double full = 0.0;
    for (const auto& [p, c] : terms) full += c / p;
    out.integral = full + out.direct_term;
  } else {
    // Fixed-step RK4 on the companion realization, sub-stepped to keep the
    // fastest mode well inside the stability region.
    Companion sys;
    sys.n = den_deg;
    sys.d.resize(den_deg);
    for (int i = 0; i < den_deg; ++i) sys.d[i] = tf.den[i] / tf.den.back();
    sys.c.assign(den_deg, 0.0);
    for (std::size_t i = 0; i < num.size(); ++i) sys.c[i] = num[i] / tf.den.back();

    double bound = 1.0;
    for (double v : sys.d) bound = std::max(bound, std::abs(v));
    const int substeps = std::max(1, static_cast<int>(std::ceil(dt * (1.0 + bound) / 0.5)));
    const double h = dt / substeps;

    std::vector<double> x(den_deg, 0.0);
    x[den_deg - 1] = 1.0;  // impulse initial condition
    out.h[0] = sys.output(x);
    for (std::size_t i = 1; i <= steps; ++i) {
      for (int s = 0; s < substeps; ++s) {
        const auto k1 = sys.deriv(x);
        std::vector<double> tmp(den_deg);
        for (int j = 0; j < den_deg; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
        const auto k2 = sys.deriv(tmp);
        for (int j = 0; j < den_deg; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
        const auto k3 = sys.deriv(tmp);
        for (int j = 0; j < den_deg; ++j) tmp[j] = x[j] + h * k3[j];
        const auto k4 = sys.deriv(tmp);
        for (int j = 0; j < den_deg; ++j)
          x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      }
      out.h[i] = sys.output(x);
    }
    // Tail correction: integral over [T, inf) equals -C A^{-1} x(T).
    const auto y = solve_companion(sys, x);
    double tail = 0.0;
    for (int j = 0; j < den_deg; ++j) tail -= sys.c[j] * y[j];
    out.integral = simpson(out.h, dt) + tail + out.direct_term;
  }

  out.min_value = *std::min_element(out.h.begin(), out.h.end());
  return out;
}

}  // namespace platoonlab
