#include "platoonlab/headway_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "platoonlab/errors.hpp"
#include "platoonlab/string_stability.hpp"

namespace platoonlab {

void check_accel_gain_interval(Architecture arch, int r, double ka) {
  if (!std::isfinite(ka) || ka < 0.0)
    throw GainRangeError("ka must be nonnegative and finite");
  switch (arch) {
    case Architecture::PF:
      if (!(ka < 1.0)) throw GainRangeError("pf requires ka in [0, 1)");
      break;
    case Architecture::RPF:
      if (r < 1) throw GainRangeError("rpf requires r >= 1");
      if (!(r * ka < 1.0)) throw GainRangeError("rpf requires r*ka in [0, 1)");
      break;
    case Architecture::OneAndRth:
      if (r < 2) throw GainRangeError("one-and-rth requires r >= 2");
      if (!(2.0 * ka < 1.0)) throw GainRangeError("one-and-rth requires 2*ka in [0, 1)");
      break;
  }
}

namespace {

double pf_bound(double ka_eff, double tau0) { return 2.0 * tau0 / (1.0 + ka_eff); }

}  // namespace

HeadwayBound min_headway(Architecture arch, int r, double ka, double tau0) {
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw GainRangeError("tau0 must be positive");
  check_accel_gain_interval(arch, r, ka);
  HeadwayBound out{arch, r, ka, 0.0};
  switch (arch) {
    case Architecture::PF:
      out.r = 1;
      out.h_min = pf_bound(ka, tau0);
      break;
    case Architecture::RPF:
      out.h_min = pf_bound(r * ka, tau0) * 2.0 / (1.0 + r);
      break;
    case Architecture::OneAndRth:
      out.h_min = pf_bound(2.0 * ka, tau0) * 2.0 / (1.0 + r);
      break;
  }
  return out;
}

NormTest analytic_norm_test(double kp, double kv, double ka, double hw, double tau) {
  const double sum = kv + hw * kp;
  const double constant = sum * sum - kv * kv - 2.0 * kp * (1.0 - ka);
  const double slope0 = 1.0 - ka * ka;

  if (tau == 0.0) {
    if (constant >= 0.0) return {true, 0.0};
    // Negative on (0, -constant/slope0); report the midpoint.
    const double omega_sq = -constant / slope0 / 2.0;
    return {false, std::sqrt(omega_sq)};
  }

  const double linear = slope0 - 2.0 * tau * sum;
  const double tau_sq = tau * tau;
  if (constant >= 0.0 && (linear >= 0.0 || linear * linear <= 4.0 * tau_sq * constant))
    return {true, 0.0};

  // The quartic dips negative between the real roots of the quadratic in
  // omega^2; the midpoint of the positive part of that interval witnesses
  // |H_e| > 1.
  const double disc = std::max(linear * linear - 4.0 * tau_sq * constant, 0.0);
  const double sq = std::sqrt(disc);
  const double lo = std::max((-linear - sq) / (2.0 * tau_sq), 0.0);
  const double hi = (-linear + sq) / (2.0 * tau_sq);
  return {false, std::sqrt(0.5 * (lo + hi))};
}

SynthesisResult synthesize_gains(double ka, double eta, double tau0) {
  if (!(ka > 0.0) || !(ka < 1.0)) throw GainRangeError("synthesize_gains: ka must lie in (0, 1)");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw GainRangeError("synthesize_gains: eta must be positive");
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw GainRangeError("synthesize_gains: tau0 must be positive");

  GainRegionSpec region;
  region.ka = ka;
  region.eta = eta;
  region.tau0 = tau0;
  const double one_plus_eta = 1.0 + eta;
  region.a1 = (1.0 - ka * ka) / (2.0 * tau0 * one_plus_eta);
  region.b1 = (1.0 + ka) * (1.0 + ka) * (1.0 - ka) / (2.0 * tau0 * tau0 * one_plus_eta * one_plus_eta);
  region.a2 = (1.0 - ka * ka) / (2.0 * tau0);
  region.b2 = (1.0 - ka * ka) * (1.0 + ka) / (4.0 * tau0 * tau0 * one_plus_eta);

  // The kp = eps sliver crosses the strip between the S1 and S2 boundary
  // lines only while eps < eta*b1; shrink for very small margins.
  double eps = std::min(region.b1, region.b2) / 100.0;
  if (!(eps < eta * region.b1)) eps = 0.5 * eta * region.b1;

  const double kv_lo = region.a1 * (1.0 - eps / region.b1);
  const double kv_hi = region.a2 * (1.0 - eps / region.b2);

  SynthesisResult out;
  out.kp = eps;
  out.kv = 0.5 * (kv_lo + kv_hi);
  out.headway = 2.0 * tau0 * one_plus_eta / (1.0 + ka);
  out.region = region;
  return out;
}

RecastResult recast_self_accel(double ka_bar, double kv_bar, double kp_bar, double tau) {
  if (!(ka_bar >= 0.0) || !std::isfinite(ka_bar))
    throw GainRangeError("recast_self_accel: ka_bar must be nonnegative");
  const double scale = 1.0 + ka_bar;
  RecastResult out;
  out.ka = ka_bar / scale;
  out.kv = kv_bar / scale;
  out.kp = kp_bar / scale;
  out.tau_eff = tau / scale;
  out.h_min = 2.0 * tau / (1.0 + 2.0 * ka_bar);
  return out;
}

namespace {

bool cell_passes(double kp, double kv, double ka, double hw, const std::vector<double>& taus) {
  for (double tau : taus) {
    const double den[4] = {kp, kv + kp * hw, 1.0, tau};
    if (!is_hurwitz(den)) return false;
    if (!analytic_norm_test(kp, kv, ka, hw, tau).holds) return false;
  }
  return true;
}

}  // namespace

FalsificationOutcome falsification_scan(double ka, double tau0, double hw,
                                        const FalsificationGrid& grid, Execution exec) {
  if (grid.n_per_axis < 2 || grid.tau_points < 2) throw Error("falsification_scan: grid too small");
  if (!(grid.kp_max > grid.kp_min) || !(grid.kp_min > 0.0) || !(grid.kv_max > grid.kv_min) ||
      !(grid.kv_min > 0.0))
    throw Error("falsification_scan: bad gain ranges");

  const int n = grid.n_per_axis;
  std::vector<double> kps(n), kvs(n), taus(grid.tau_points);
  const double lkp = std::log10(grid.kp_min), ukp = std::log10(grid.kp_max);
  const double lkv = std::log10(grid.kv_min), ukv = std::log10(grid.kv_max);
  for (int i = 0; i < n; ++i) {
    kps[i] = std::pow(10.0, lkp + (ukp - lkp) * i / (n - 1));
    kvs[i] = std::pow(10.0, lkv + (ukv - lkv) * i / (n - 1));
  }
  for (int i = 0; i < grid.tau_points; ++i)
    taus[i] = tau0 * static_cast<double>(i) / (grid.tau_points - 1);

  std::vector<unsigned char> pass(static_cast<std::size_t>(n) * n, 0);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int i = 0; i < n * n; ++i)
      pass[i] = cell_passes(kps[i / n], kvs[i % n], ka, hw, taus) ? 1 : 0;
  } else {
    for (int i = 0; i < n * n; ++i)
      pass[i] = cell_passes(kps[i / n], kvs[i % n], ka, hw, taus) ? 1 : 0;
  }

  FalsificationOutcome out;
  out.total_cells = static_cast<long>(n) * n;
  for (int i = 0; i < n * n; ++i) {
    if (!pass[i]) continue;
    if (out.passing_cells == 0) {
      out.first_pass_kp = kps[i / n];
      out.first_pass_kv = kvs[i % n];
    }
    ++out.passing_cells;
  }
  return out;
}

}  // namespace platoonlab
