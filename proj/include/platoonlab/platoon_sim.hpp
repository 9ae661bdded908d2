#pragma once

#include <ostream>
#include <vector>

#include "platoonlab/transfer_function.hpp"

namespace platoonlab {

/// Sinusoidal lead-vehicle acceleration, active on [t_on, t_off].
struct Disturbance {
  double amplitude = 2.0;  ///< m/s^2
  double frequency = 1.0;  ///< rad/s
  double t_on = 5.0;       ///< s
  double t_off = 10.0;     ///< s
};

struct PlatoonConfig {
  int n = 15;  ///< vehicle count, lead included
  ControllerSpec spec;
  LagSpec lag;            ///< the simulation runs at lag.tau
  double v_ref = 20.0;    ///< m/s
  Disturbance disturbance;
  double dt = 1e-3;       ///< s
  double t_end = 40.0;    ///< s
  void validate() const;
};

/// Trajectories on the uniform time grid plus per-vehicle peak |e_i|.
/// Vehicle 0 is the lead; its spacing error has no meaning and is stored
/// as zero.
struct SimResult {
  std::vector<double> t;
  std::vector<std::vector<double>> x, v, a, u, e;  ///< [vehicle][step]
  std::vector<double> peak_abs_error;              ///< [vehicle], entry 0 unused
};

/// Taps available to follower i: lag l <= i, and for one-and-rth the r-th
/// tap only when i > r. Gains are never re-tuned for short prefixes.
std::vector<GainTap> active_taps(const ControllerSpec& spec, int vehicle);

/// Equilibrium state: x_0 = 0, x_i = x_{i-1} - d - hw*v_ref, all speeds at
/// v_ref, accelerations zero. Layout: [x_0, v_0, a_0, x_1, v_1, a_1, ...].
std::vector<double> init_equilibrium(const PlatoonConfig& cfg);

/// Classical fixed-step RK4 integration of the coupled platoon. The lead
/// acceleration is the prescribed disturbance; follower i applies the tap
/// law over its available predecessors and, for positive lag, feeds the
/// command through tau*da/dt + a = u. Throws SimDivergedError when the state
/// stops being finite.
SimResult simulate(const PlatoonConfig& cfg);

/// Reduced-order path for instantaneous actuation (lag.tau == 0): a_i == u_i
/// algebraically and the per-vehicle state is (x_i, v_i). simulate()
/// dispatches here on its own; exposed for direct use.
SimResult simulate_instant_actuation(const PlatoonConfig& cfg);

enum class TrendVerdict { Attenuating, Amplifying, Mixed };
const char* to_string(TrendVerdict v);

/// Classifies the follower peak-error profile: Attenuating when no
/// consecutive peak grows by more than tol, Amplifying when no consecutive
/// peak shrinks by more than tol and the last peak exceeds the first, Mixed
/// otherwise. All-zero peaks count as Attenuating.
TrendVerdict amplification_verdict(const SimResult& result, double tol = 0.02);

/// Long-format trajectory CSV, header exactly `t,vehicle,x,v,a,u,e`.
void write_trajectory_csv(std::ostream& os, const SimResult& result);

}  // namespace platoonlab
