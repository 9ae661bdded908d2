#pragma once

#include <span>
#include <vector>

#include "platoonlab/parallel.hpp"
#include "platoonlab/transfer_function.hpp"

namespace platoonlab {

/// Frequency-sweep settings for the H-infinity evaluation: log grid from
/// omega_min to omega_max plus omega = 0 and the high-frequency limit, with
/// golden-section refinement around every grid-local maximum.
struct SweepConfig {
  double omega_min = 1e-3;      ///< rad/s
  double omega_max = 1e3;       ///< rad/s
  int points_per_decade = 200;
  double refine_tol = 1e-10;    ///< relative interval tolerance of the refinement
  int tau_grid_points = 33;     ///< uniform lag grid on [0, tau0], endpoints included
  void validate() const;
};

enum class Verdict { RobustlyStringStable, Violated };
enum class Criterion { HinfSingle, SpectralRadius, SumNorm };

const char* to_string(Verdict v);
const char* to_string(Criterion c);

/// Slack on the `worst_value <= 1` comparison, absorbing sweep quantization.
inline constexpr double kVerdictTol = 1e-9;

struct StabilityReport {
  Verdict verdict = Verdict::Violated;
  double worst_value = 0.0;
  double worst_omega = 0.0;  ///< rad/s; +inf marks the high-frequency limit
  double worst_tau = 0.0;    ///< s
  Criterion criterion = Criterion::SumNorm;
};

/// Routh test for polynomials of degree <= 3 (ascending coefficients):
/// strict positivity for degrees <= 2, plus a1*a2 > a0*a3 for degree 3.
/// Degrees above 3 are unsupported and throw.
bool is_hurwitz(std::span<const double> den);

struct HinfResult {
  double value = 0.0;
  double omega = 0.0;
};

/// sup over [0, inf) of |tf(j w)|. Requires a Hurwitz denominator.
HinfResult hinf_norm(const RationalTf& tf, const SweepConfig& cfg = {});

/// Largest |tf(j w)| over [omega_lo, omega_hi] only (log grid + refinement).
/// Useful for locating the worst finite frequency when the norm is attained
/// at DC.
HinfResult peak_magnitude(const RationalTf& tf, double omega_lo, double omega_hi,
                          int points_per_decade = 200, double refine_tol = 1e-10);

/// Spectral radius of z^r - sum_l H_l(j w) z^(r-l), the characteristic
/// polynomial of the spatially discrete error propagation. Roots come from a
/// Durand-Kerner simultaneous iteration (tolerance 1e-12, at most 200
/// passes); lags above 8 are rejected.
double spectral_radius(std::span<const TapTf> taps, double omega);

/// Worst case of the chosen criterion over a uniform lag grid on [0, tau0].
/// The grid always contains both endpoints; the report carries the
/// maximizing (omega, tau) with ties broken toward smaller omega, then
/// smaller tau. Non-Hurwitz denominators abort with the offending tau.
StabilityReport robust_check(const ControllerSpec& spec, double tau0,
                             const SweepConfig& cfg = {},
                             Criterion criterion = Criterion::SumNorm,
                             Execution exec = Execution::parallel);

}  // namespace platoonlab
