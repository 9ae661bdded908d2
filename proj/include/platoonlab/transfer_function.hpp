#pragma once

#include <complex>
#include <vector>

namespace platoonlab {

/// Proper rational transfer function with real coefficients stored in
/// ascending powers of s. Coefficients are kept as built (no monic
/// normalization) so that the constant terms stay exact; trailing zero
/// coefficients are trimmed, which is how an instantaneous-actuation
/// denominator drops from degree 3 to degree 2.
struct RationalTf {
  std::vector<double> num;
  std::vector<double> den;

  int num_degree() const { return static_cast<int>(num.size()) - 1; }
  int den_degree() const { return static_cast<int>(den.size()) - 1; }
  double dc_gain() const { return num.front() / den.front(); }

  /// Drops exactly-zero leading (highest-power) coefficients.
  void trim();
  /// Checks finiteness, properness and a nonzero denominator lead.
  void validate() const;
};

/// Information-flow architecture: immediate predecessor only, the r nearest
/// predecessors, or the immediate plus the r-th predecessor.
enum class Architecture { PF, RPF, OneAndRth };

const char* to_string(Architecture arch);

/// Feedback gains tied to the predecessor `lag` vehicles ahead.
struct GainTap {
  int lag = 1;
  double kp = 0.0;  ///< position gain, > 0
  double kv = 0.0;  ///< velocity gain, > 0
  double ka = 0.0;  ///< communicated acceleration gain, >= 0
};

/// Controller description: architecture, per-tap gains, time headway and
/// standstill distance. The standstill distance to the l-th predecessor is
/// l * standstill, which keeps the platoon equilibrium consistent.
struct ControllerSpec {
  Architecture arch = Architecture::PF;
  std::vector<GainTap> taps;
  double headway = 1.0;     ///< h_w [s]
  double standstill = 5.0;  ///< d [m]

  static ControllerSpec pf(double kp, double kv, double ka, double hw,
                           double d = 5.0);
  /// r taps with equal gains on lags 1..r.
  static ControllerSpec rpf(int r, double kp, double kv, double ka, double hw,
                            double d = 5.0);
  /// Two equal-gain taps on lags {1, r}, r >= 2.
  static ControllerSpec one_and_rth(int r, double kp, double kv, double ka,
                                    double hw, double d = 5.0);

  int max_lag() const;
  void validate() const;  ///< throws GainRangeError / Error on bad fields
};

/// Parasitic actuation lag tau and its upper bound tau0, 0 <= tau <= tau0.
struct LagSpec {
  double tau = 0.0;
  double tau0 = 0.5;
  void validate() const;
};

/// Spacing-error transfer function for the plain predecessor-follower
/// controller without acceleration feedback:
///   (kv s + kp) / (tau s^3 + s^2 + (kv + kp hw) s + kp).
/// Rejects anything but a single-tap spec with ka == 0.
RationalTf build_error_tf_basic(const ControllerSpec& spec, const LagSpec& lag);

/// Spacing-error transfer function with predecessor acceleration feedback:
///   (ka s^2 + kv s + kp) / (tau s^3 + s^2 + (kv + kp hw) s + kp).
RationalTf build_error_tf_accel(const ControllerSpec& spec, const LagSpec& lag);

struct TapTf {
  int lag = 1;
  RationalTf tf;
};

/// One transfer function per tap. All taps share the denominator
///   tau s^3 + s^2 + sum_l[(kv_l + l kp_l hw) s + kp_l],
/// tap l carries the numerator ka_l s^2 + kv_l s + kp_l, and the DC gains
/// sum to one. Accepts any architecture; a single tap reduces to
/// build_error_tf_accel.
std::vector<TapTf> build_error_tf_taps(const ControllerSpec& spec,
                                       const LagSpec& lag);

/// Evaluates num(s)/den(s) at an arbitrary complex point (Horner).
std::complex<double> eval_s(const RationalTf& tf, std::complex<double> s);

/// Evaluates the frequency response at s = j*omega, omega >= 0. Throws
/// NonHurwitzError when the denominator magnitude falls below 1e-300
/// (pole on the imaginary axis).
std::complex<double> eval_jw(const RationalTf& tf, double omega);

}  // namespace platoonlab
