#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "platoonlab/parallel.hpp"
#include "platoonlab/transfer_function.hpp"

namespace platoonlab {

/// Predecessor-follower gains after scaling time by the lag bound:
///   kp_s = kp tau0^2, kv_s = kv tau0, hw_s = hw/tau0, tau_s = tau/tau0,
/// so that the lag parameter always lives in [0, 1].
struct ScaledTf {
  double ka = 0.0;
  double kp = 0.0;   ///< scaled position gain
  double kv = 0.0;   ///< scaled velocity gain
  double hw = 0.0;   ///< scaled headway
  double tau = 0.0;  ///< scaled lag, in [0, 1]
};

/// Scales a single-predecessor controller by tau0. Requires tau in [0, tau0].
ScaledTf time_scale(const ControllerSpec& spec, double tau, double tau0);

/// Recovers the unscaled gains for a given lag bound.
ControllerSpec unscale(const ScaledTf& scaled, double tau0, double d = 5.0);

/// Error transfer function of the scaled parameters:
///   (ka s^2 + kv s + kp) / (tau s^3 + s^2 + (kv + kp hw) s + kp).
RationalTf scaled_error_tf(const ScaledTf& scaled);

/// Negated pole locations of a degree-3 denominator, ascending
/// (poles at -p1 > -p2 > -p3 on the real axis). Empty when the roots are not
/// all real and distinct — that is data, not a failure: the residue-based
/// non-negativity criterion simply does not apply there.
struct CubicPoles {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
};

std::optional<CubicPoles> cubic_poles(std::span<const double> den);

/// Partial-fraction form of a strictly proper 3-pole transfer function:
/// h(t) = c1 e^(-p1 t) + c2 e^(-p2 t) + c3 e^(-p3 t), with the residues
/// summing to the numerator lead over the denominator lead.
struct PoleResidueForm {
  CubicPoles poles;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

std::optional<PoleResidueForm> pole_residue_form(const ScaledTf& scaled);

/// Non-negativity of the impulse response at zero scaled lag: with real
/// distinct poles -p1, -p2 and real distinct zeros, requires
///   p1 <= hw kp / (1 - ka) <= p1 + p2.
/// Returns false when a structural precondition (real distinct poles and
/// zeros) fails.
bool nnir_tau_zero(const ScaledTf& scaled);

/// Non-negativity for scaled lag in (0, 1]: requires real distinct stable
/// poles and residues with c1 >= 0, c2 < 0, c3 > (p2-p1)/(p3-p1) * c2.
/// nullopt marks the criterion as not applicable (poles not real distinct).
std::optional<bool> nnir_tau_positive(const ScaledTf& scaled);

/// 21 evenly spaced scaled-lag samples on [0, 1].
std::vector<double> default_tau_samples();

struct RegionGridSpec {
  double kp_min = 1e-4, kp_max = 1e-2;  ///< brackets the known admissible kp by a decade each way
  double kv_min = 1e-2, kv_max = 0.3;
  int n_kp = 41, n_kv = 41;
};

/// Per-cell labels of the admissible-gain scan; `admissible` is the
/// conjunction of the other three by construction.
struct RegionCell {
  bool cond_tau_zero = false;
  bool real_distinct = false;
  bool cond_tau_positive = false;
  bool admissible() const { return cond_tau_zero && real_distinct && cond_tau_positive; }
};

struct RegionScanResult {
  std::vector<double> kp;       ///< log-spaced axis values
  std::vector<double> kv;
  std::vector<RegionCell> cells;  ///< row-major, kp index major
  const RegionCell& at(int ikp, int ikv) const {
    return cells[static_cast<std::size_t>(ikp) * kv.size() + ikv];
  }
  long admissible_count() const;
};

/// Grids the scaled gain plane and labels every cell with the zero-lag
/// condition, pole realness over all lag samples, and the positive-lag
/// residue condition over all positive samples.
RegionScanResult region_scan(double ka, double hw_scaled, const RegionGridSpec& grid = {},
                             std::span<const double> tau_samples = {},
                             Execution exec = Execution::parallel);

/// CSV columns: k_tilde_p,k_tilde_v,cond_tau0,real_distinct,cond_tau_pos.
void write_region_csv(std::ostream& os, const RegionScanResult& result);

/// Sampled impulse response. When the poles are real and distinct the
/// samples come from the pole/residue form; otherwise from fixed-step
/// integration of the companion realization. An equal-degree function
/// contributes an impulsive direct term that is kept out of the samples.
struct ImpulseResult {
  std::vector<double> t;
  std::vector<double> h;
  double min_value = 0.0;
  double integral = 0.0;     ///< tail-corrected integral over [0, inf), direct term included
  double direct_term = 0.0;
};

ImpulseResult impulse_numeric(const RationalTf& tf, double t_max, double dt);

}  // namespace platoonlab
