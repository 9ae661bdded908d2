#include "platoonlab/string_stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "platoonlab/errors.hpp"

namespace platoonlab {

void SweepConfig::validate() const {
  if (!(omega_min > 0.0)) throw Error("sweep: omega_min must be positive");
  if (!(omega_max > omega_min)) throw Error("sweep: omega_max must exceed omega_min");
  if (points_per_decade < 16) throw Error("sweep: points_per_decade must be >= 16");
  if (!(refine_tol > 0.0)) throw Error("sweep: refine_tol must be positive");
  if (tau_grid_points < 2) throw Error("sweep: tau_grid_points must be >= 2");
}

const char* to_string(Verdict v) {
  return v == Verdict::RobustlyStringStable ? "RobustlyStringStable" : "Violated";
}

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::HinfSingle: return "hinf";
    case Criterion::SpectralRadius: return "rho";
    case Criterion::SumNorm: return "sum";
  }
  return "?";
}

bool is_hurwitz(std::span<const double> den) {
  std::vector<double> c(den.begin(), den.end());
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) throw Error("is_hurwitz: empty coefficient list");
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg > 3) throw Error("is_hurwitz: degree above 3 unsupported");
  if (deg == 0) return c[0] != 0.0;
  if (c.back() < 0.0)
    for (double& v : c) v = -v;
  for (double v : c)
    if (!(v > 0.0)) return false;
  if (deg == 3 && !(c[1] * c[2] > c[0] * c[3])) return false;
  return true;
}

namespace {

double magnitude_at(const RationalTf& tf, double omega) { return std::abs(eval_jw(tf, omega)); }

// Golden-section maximization of |tf(jw)| on [a, b].
HinfResult golden_max(const RationalTf& tf, double a, double b, double rel_tol) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = magnitude_at(tf, c);
  double fd = magnitude_at(tf, d);
  for (int it = 0; it < 300 && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-30); ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = magnitude_at(tf, d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = magnitude_at(tf, c);
    }
  }
  const double m = 0.5 * (a + b);
  return {magnitude_at(tf, m), m};
}

struct SweepOutcome {
  double value = -1.0;
  double omega = 0.0;
};

void consider(SweepOutcome& best, double value, double omega) {
  if (value > best.value || (value == best.value && omega < best.omega)) {
    best.value = value;
    best.omega = omega;
  }
}

// Shared by hinf_norm and peak_magnitude: grid sweep with refinement around
// every grid-local maximum. `include_zero` adds omega = 0; `include_tail`
// adds the high-frequency limit for equal-degree functions.
HinfResult sweep_peak(const RationalTf& tf, double omega_lo, double omega_hi,
                      int points_per_decade, double refine_tol, bool include_zero,
                      bool include_tail) {
  const double decades = std::log10(omega_hi / omega_lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)));
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) + 2);
  if (include_zero) w.push_back(0.0);
  for (int i = 0; i <= n; ++i)
    w.push_back(omega_lo * std::pow(10.0, decades * static_cast<double>(i) / n));

  std::vector<double> mag(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) mag[i] = magnitude_at(tf, w[i]);

  SweepOutcome best;
  for (std::size_t i = 0; i < w.size(); ++i) consider(best, mag[i], w[i]);

  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1]) {
      HinfResult r = golden_max(tf, w[i - 1], w[i + 1], refine_tol);
      consider(best, r.value, r.omega);
    }
  }
  if (mag.size() >= 2 && mag.back() >= mag[mag.size() - 2]) {
    HinfResult r = golden_max(tf, w[w.size() - 2], w.back(), refine_tol);
    consider(best, r.value, r.omega);
  }
  if (include_tail && tf.num_degree() == tf.den_degree()) {
    consider(best, std::abs(tf.num.back() / tf.den.back()),
             std::numeric_limits<double>::infinity());
  }
  return {best.value, best.omega};
}

}  // namespace

HinfResult hinf_norm(const RationalTf& tf, const SweepConfig& cfg) {
  cfg.validate();
  tf.validate();
  if (!is_hurwitz(tf.den)) throw NonHurwitzError("hinf_norm: denominator is not Hurwitz");
  return sweep_peak(tf, cfg.omega_min, cfg.omega_max, cfg.points_per_decade, cfg.refine_tol,
                    /*include_zero=*/true, /*include_tail=*/true);
}

HinfResult peak_magnitude(const RationalTf& tf, double omega_lo, double omega_hi,
                          int points_per_decade, double refine_tol) {
  tf.validate();
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) throw Error("peak_magnitude: bad band");
  if (!is_hurwitz(tf.den)) throw NonHurwitzError("peak_magnitude: denominator is not Hurwitz");
  return sweep_peak(tf, omega_lo, omega_hi, points_per_decade, refine_tol,
                    /*include_zero=*/false, /*include_tail=*/false);
}

namespace {

using Complex = std::complex<double>;

Complex poly_eval(const std::vector<Complex>& a, Complex z) {
  Complex acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Durand-Kerner simultaneous iteration on a monic polynomial, Gauss-Seidel
// style updates, absolute step tolerance.
std::vector<Complex> durand_kerner(const std::vector<Complex>& coeff, double tol = 1e-12,
                                   int max_iter = 200) {
  const int n = static_cast<int>(coeff.size()) - 1;
  std::vector<Complex> z(n);
  const Complex seed(0.4, 0.9);
  Complex p = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= seed;
    z[k] = p;
  }
  for (int it = 0; it < max_iter; ++it) {
    double step = 0.0;
    for (int k = 0; k < n; ++k) {
      Complex denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (std::abs(denom) < 1e-300) {
        z[k] += Complex(1e-8, 1e-8);
        denom = 1.0;
        for (int j = 0; j < n; ++j)
          if (j != k) denom *= z[k] - z[j];
      }
      const Complex delta = poly_eval(coeff, z[k]) / denom;
      z[k] -= delta;
      step = std::max(step, std::abs(delta));
    }
    if (step <= tol) return z;
  }
  double residual = 0.0;
  for (const Complex& r : z) residual = std::max(residual, std::abs(poly_eval(coeff, r)));
  throw ConvergenceError("durand_kerner: no convergence after 200 iterations (residual " +
                         std::to_string(residual) + ")");
}

}  // namespace

double spectral_radius(std::span<const TapTf> taps, double omega) {
  if (taps.empty()) throw Error("spectral_radius: no taps");
  int r = 0;
  for (const auto& t : taps) r = std::max(r, t.lag);
  if (r > 8) throw Error("spectral_radius: lag order above 8 unsupported");
  if (r == 1) return std::abs(eval_jw(taps[0].tf, omega));
  std::vector<Complex> coeff(static_cast<std::size_t>(r) + 1, Complex(0.0));
  coeff[r] = 1.0;
  for (const auto& t : taps) coeff[r - t.lag] -= eval_jw(t.tf, omega);
  double rho = 0.0;
  for (const Complex& root : durand_kerner(coeff)) rho = std::max(rho, std::abs(root));
  return rho;
}

namespace {

struct TauCell {
  double value = -1.0;
  double omega = 0.0;
  double tau = 0.0;
  bool non_hurwitz = false;
  std::exception_ptr error;  // exceptions may not cross the omp region
};

TauCell evaluate_tau(const ControllerSpec& spec, double tau, double tau0, const SweepConfig& cfg,
                     Criterion criterion) {
  TauCell cell;
  cell.tau = tau;
  // The built transfer functions depend on tau only; the bound field merely
  // has to satisfy the LagSpec invariant (robust_check itself accepts tau0=0).
  const auto taps = build_error_tf_taps(spec, LagSpec{tau, std::max({tau0, tau, 1.0})});
  if (!is_hurwitz(taps[0].tf.den)) {
    cell.non_hurwitz = true;
    return cell;
  }
  switch (criterion) {
    case Criterion::HinfSingle: {
      if (taps.size() != 1)
        throw Error("robust_check: criterion hinf requires a single-tap architecture");
      const HinfResult r = hinf_norm(taps[0].tf, cfg);
      cell.value = r.value;
      cell.omega = r.omega;
      break;
    }
    case Criterion::SumNorm: {
      double total = 0.0;
      double top = -1.0;
      for (const auto& t : taps) {
        const HinfResult r = hinf_norm(t.tf, cfg);
        total += r.value;
        if (r.value > top) {
          top = r.value;
          cell.omega = r.omega;
        }
      }
      cell.value = total;
      break;
    }
    case Criterion::SpectralRadius: {
      const double decades = std::log10(cfg.omega_max / cfg.omega_min);
      const int n = std::max(2, static_cast<int>(std::ceil(decades * cfg.points_per_decade)));
      SweepOutcome best;
      consider(best, spectral_radius(taps, 0.0), 0.0);
      for (int i = 0; i <= n; ++i) {
        const double w = cfg.omega_min * std::pow(10.0, decades * static_cast<double>(i) / n);
        consider(best, spectral_radius(taps, w), w);
      }
      cell.value = best.value;
      cell.omega = best.omega;
      break;
    }
  }
  return cell;
}

}  // namespace

StabilityReport robust_check(const ControllerSpec& spec, double tau0, const SweepConfig& cfg,
                             Criterion criterion, Execution exec) {
  spec.validate();
  cfg.validate();
  if (!(tau0 >= 0.0) || !std::isfinite(tau0)) throw Error("robust_check: tau0 must be >= 0");
  if (criterion == Criterion::HinfSingle && spec.taps.size() != 1)
    throw Error("robust_check: criterion hinf requires a single-tap architecture");

  const int m = tau0 == 0.0 ? 1 : cfg.tau_grid_points;
  std::vector<double> taus(m);
  for (int i = 0; i < m; ++i)
    taus[i] = m == 1 ? 0.0 : tau0 * static_cast<double>(i) / (m - 1);

  std::vector<TauCell> cells(taus.size());
  auto guarded = [&](int i) {
    try {
      cells[i] = evaluate_tau(spec, taus[i], tau0, cfg, criterion);
    } catch (...) {
      cells[i].tau = taus[i];
      cells[i].error = std::current_exception();
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int i = 0; i < static_cast<int>(taus.size()); ++i) guarded(i);
  } else {
    for (int i = 0; i < static_cast<int>(taus.size()); ++i) guarded(i);
  }

  for (const TauCell& c : cells)
    if (c.error) std::rethrow_exception(c.error);
  for (const TauCell& c : cells)
    if (c.non_hurwitz)
      throw NonHurwitzError("robust_check: closed loop is not Hurwitz at tau = " +
                            std::to_string(c.tau));

  StabilityReport report;
  report.criterion = criterion;
  report.worst_value = -1.0;
  for (const TauCell& c : cells) {
    const bool better = c.value > report.worst_value ||
                        (c.value == report.worst_value && c.omega < report.worst_omega);
    if (better) {
      report.worst_value = c.value;
      report.worst_omega = c.omega;
      report.worst_tau = c.tau;
    }
  }
  report.verdict = report.worst_value <= 1.0 + kVerdictTol ? Verdict::RobustlyStringStable
                                                           : Verdict::Violated;
  return report;
}

}  // namespace platoonlab
