#pragma once

#include "platoonlab/parallel.hpp"
#include "platoonlab/transfer_function.hpp"

namespace platoonlab {

/// Validates the architecture-specific admissible interval of the
/// acceleration gain: pf needs ka in [0,1), rpf needs r*ka in [0,1),
/// one-and-rth needs 2*ka in [0,1) with r >= 2. Throws GainRangeError.
void check_accel_gain_interval(Architecture arch, int r, double ka);

struct HeadwayBound {
  Architecture arch = Architecture::PF;
  int r = 1;
  double ka = 0.0;
  double h_min = 0.0;  ///< s
};

/// Minimum employable time headway per communication type:
///   pf            2 tau0 / (1 + ka)
///   rpf           4 tau0 / ((1 + r)(1 + r ka))
///   one-and-rth   4 tau0 / ((1 + r)(1 + 2 ka))
/// computed through the pf form so the r-scaling identity holds exactly.
HeadwayBound min_headway(Architecture arch, int r, double ka, double tau0);

struct NormTest {
  bool holds = false;
  double witness_omega = 0.0;  ///< where |H_e(jw)| > 1; meaningful when !holds
};

/// Closed-form test of sup_w |H_e(jw)| <= 1 via the quartic-in-omega
/// inequality
///   tau^2 w^4 + w^2 [(1 - ka^2) - 2 tau (hw kp + kv)]
///     + (kv + hw kp)^2 - kv^2 - 2 kp (1 - ka) >= 0.
/// For tau = 0 the constant term alone decides; for tau > 0 the inequality
/// holds iff the constant term is nonnegative and either the linear
/// coefficient is nonnegative or the discriminant is nonpositive.
/// Precondition: kp, kv > 0, ka in [0,1), Hurwitz denominator.
NormTest analytic_norm_test(double kp, double kv, double ka, double hw, double tau);

/// Half-plane intercepts of the two gain sets whose intersection certifies
/// robust string stability at hw = 2 tau0 (1 + eta) / (1 + ka):
///   S1 (DC inequality)        kv/a1 + kp/b1 >= 1
///   S2 (lag-perturbed case)   kv/a2 + kp/b2 <= 1
/// a1 < a2 holds for every eta > 0, so the strip between them is never empty.
struct GainRegionSpec {
  double ka = 0.0;
  double eta = 0.0;
  double tau0 = 0.0;
  double a1 = 0.0, b1 = 0.0;
  double a2 = 0.0, b2 = 0.0;
};

struct SynthesisResult {
  double kp = 0.0;
  double kv = 0.0;
  double headway = 0.0;  ///< 2 tau0 (1 + eta) / (1 + ka)
  GainRegionSpec region;
};

/// Deterministic point in S1 n S2: kp is a thin sliver (min(b1,b2)/100,
/// shrunk when eta is small enough to make that sliver miss the strip) and
/// kv is the midpoint between the two boundary lines along it.
SynthesisResult synthesize_gains(double ka, double eta, double tau0);

/// Equivalent lag-and-gain parameters of a controller that also feeds back
/// the controlled vehicle's own acceleration with gain ka_bar:
///   tau_eff = tau/(1+ka_bar), k* = k*_bar/(1+ka_bar),
/// with the implied headway bound h_min = 2 tau/(1 + 2 ka_bar) when the
/// passed tau is the lag bound.
struct RecastResult {
  double ka = 0.0;
  double kv = 0.0;
  double kp = 0.0;
  double tau_eff = 0.0;
  double h_min = 0.0;
};

RecastResult recast_self_accel(double ka_bar, double kv_bar, double kp_bar, double tau);

/// Falsification sweep: a log grid of (kp, kv) pairs, each tested with
/// analytic_norm_test on a uniform lag grid. A cell passes when the closed
/// loop is Hurwitz and the norm test holds for every grid lag.
struct FalsificationGrid {
  double kp_min = 1e-3, kp_max = 1e2;
  double kv_min = 1e-3, kv_max = 1e2;
  int n_per_axis = 40;
  int tau_points = 33;
};

struct FalsificationOutcome {
  long total_cells = 0;
  long passing_cells = 0;
  double first_pass_kp = 0.0;  ///< row-major first passing cell, if any
  double first_pass_kv = 0.0;
};

FalsificationOutcome falsification_scan(double ka, double tau0, double hw,
                                        const FalsificationGrid& grid = {},
                                        Execution exec = Execution::parallel);

}  // namespace platoonlab
