#include <doctest.h>

#include <cmath>
#include <sstream>

#include "platoonlab/errors.hpp"
#include "platoonlab/platoon_sim.hpp"
#include "platoonlab/string_stability.hpp"

using namespace platoonlab;

namespace {

PlatoonConfig table2_config(int r, double ka, double hw) {
  PlatoonConfig cfg;
  cfg.n = 15;
  cfg.spec = ControllerSpec::rpf(r, 45.0, 0.8, ka, hw, 5.0);
  cfg.lag = {0.5, 0.5};
  cfg.v_ref = 20.0;
  cfg.disturbance = {2.0, 1.0, 5.0, 10.0};
  cfg.dt = 1e-3;
  cfg.t_end = 40.0;
  return cfg;
}

// steady-state amplitude of e_i over [t_lo, t_hi]
double window_amplitude(const SimResult& r, int vehicle, double t_lo, double t_hi) {
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    if (r.t[k] < t_lo || r.t[k] > t_hi) continue;
    lo = std::min(lo, r.e[vehicle][k]);
    hi = std::max(hi, r.e[vehicle][k]);
  }
  return 0.5 * (hi - lo);
}

}  // namespace

TEST_SUITE_BEGIN("platoon_sim");

TEST_CASE("equilibrium spacing") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 2;
  const auto state = init_equilibrium(cfg);
  CHECK(state[0] == 0.0);
  CHECK(state[3] == doctest::Approx(-22.6).epsilon(1e-14));
  CHECK(state[4] == 20.0);
  CHECK(state[5] == 0.0);

  cfg.v_ref = 0.0;
  const auto standstill = init_equilibrium(cfg);
  CHECK(standstill[3] == -5.0);
}

TEST_CASE("tap availability along the string") {
  const auto rpf3 = ControllerSpec::rpf(3, 45.0, 0.8, 0.25, 0.5);
  CHECK(active_taps(rpf3, 1).size() == 1);
  CHECK(active_taps(rpf3, 2).size() == 2);
  CHECK(active_taps(rpf3, 3).size() == 3);
  CHECK(active_taps(rpf3, 9).size() == 3);

  const auto mixed = ControllerSpec::one_and_rth(3, 45.0, 0.8, 0.2, 0.5);
  CHECK(active_taps(mixed, 1).size() == 1);
  CHECK(active_taps(mixed, 3).size() == 1);  // the r-th tap needs index > r
  CHECK(active_taps(mixed, 4).size() == 2);
  CHECK(active_taps(mixed, 4)[1].lag == 3);
}

TEST_CASE("zero disturbance keeps the platoon at equilibrium") {
  PlatoonConfig cfg = table2_config(2, 0.25, 0.68);
  cfg.n = 6;
  cfg.t_end = 5.0;
  cfg.disturbance.amplitude = 0.0;
  const auto r = simulate(cfg);
  double peak = 0.0;
  for (int i = 1; i < cfg.n; ++i) peak = std::max(peak, r.peak_abs_error[i]);
  CHECK(peak <= 1e-9);
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);

  cfg.lag.tau = 0.0;
  const auto instant = simulate(cfg);
  peak = 0.0;
  for (int i = 1; i < cfg.n; ++i) peak = std::max(peak, instant.peak_abs_error[i]);
  CHECK(peak <= 1e-9);
}

TEST_CASE("errors start at zero") {
  PlatoonConfig cfg = table2_config(3, 0.25, 0.5);
  cfg.n = 8;
  cfg.t_end = 1.0;
  cfg.disturbance = {2.0, 1.0, 0.2, 0.8};
  const auto r = simulate(cfg);
  for (int i = 1; i < cfg.n; ++i) CHECK(r.e[i][0] == 0.0);
}

TEST_CASE("bound-respecting headway attenuates along the string") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 8;
  cfg.t_end = 30.0;
  const auto r = simulate(cfg);
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);
  for (int i = 1; i + 1 < cfg.n; ++i)
    CHECK(r.peak_abs_error[i + 1] <= 1.02 * r.peak_abs_error[i]);
}

TEST_CASE("bound-violating headway amplifies along the string") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.68);
  cfg.n = 8;
  cfg.t_end = 30.0;
  const auto r = simulate(cfg);
  CHECK(amplification_verdict(r) == TrendVerdict::Amplifying);
  CHECK(r.peak_abs_error[cfg.n - 1] > r.peak_abs_error[1]);
}

TEST_CASE("instantaneous actuation is the small-lag limit") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 3;
  cfg.t_end = 0.5;
  cfg.dt = 2e-7;
  cfg.disturbance = {2.0, 20.0, 0.05, 0.45};
  cfg.lag = {0.0, 0.5};
  const auto instant = simulate(cfg);
  cfg.lag.tau = 1e-6;
  const auto lagged = simulate(cfg);
  double diff = 0.0, scale = 0.0;
  for (int i = 1; i < cfg.n; ++i) {
    for (std::size_t k = 0; k < instant.t.size(); k += 11) {
      diff = std::max(diff, std::abs(instant.e[i][k] - lagged.e[i][k]));
      scale = std::max(scale, std::abs(instant.e[i][k]));
    }
  }
  CHECK(scale > 1e-4);  // the disturbance actually excited the string
  CHECK(diff <= 1e-3);
}

TEST_CASE("zero-lag run with a satisfied nominal bound attenuates") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 8;
  cfg.t_end = 30.0;
  cfg.lag = {0.0, 0.5};
  const auto r = simulate(cfg);
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);
}

TEST_CASE("halving the step leaves the peaks unchanged to fourth order") {
  PlatoonConfig cfg = table2_config(2, 0.25, 0.68);
  cfg.n = 5;
  cfg.t_end = 15.0;
  cfg.dt = 2e-3;
  const auto coarse = simulate(cfg);
  cfg.dt = 1e-3;
  const auto fine = simulate(cfg);
  for (int i = 1; i < cfg.n; ++i)
    CHECK(coarse.peak_abs_error[i] ==
          doctest::Approx(fine.peak_abs_error[i]).epsilon(1e-3));
}

TEST_CASE("spacing errors are invariant under a reference-speed shift") {
  PlatoonConfig cfg = table2_config(2, 0.25, 0.8);
  cfg.n = 5;
  cfg.t_end = 15.0;
  const auto base = simulate(cfg);
  cfg.v_ref = 27.5;
  const auto shifted = simulate(cfg);
  for (int i = 1; i < cfg.n; ++i)
    for (std::size_t k = 0; k < base.t.size(); k += 53)
      CHECK(shifted.e[i][k] == doctest::Approx(base.e[i][k]).epsilon(1e-9));
}

TEST_CASE("downstream truncation does not disturb the leading vehicles") {
  PlatoonConfig cfg = table2_config(2, 0.25, 0.8);
  cfg.n = 8;
  cfg.t_end = 8.0;
  const auto full = simulate(cfg);
  cfg.n = 6;
  const auto truncated = simulate(cfg);
  for (int i = 1; i < 6; ++i)
    for (std::size_t k = 0; k < truncated.t.size(); k += 97)
      CHECK(full.e[i][k] == truncated.e[i][k]);
}

TEST_CASE("steady-state gain between neighbours matches the frequency response") {
  const auto tf = build_error_tf_accel(ControllerSpec::pf(45.0, 0.8, 0.25, 0.88), {0.5, 0.5});
  const auto peak = peak_magnitude(tf, 1.0, 100.0);

  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 6;
  cfg.t_end = 40.0;
  cfg.disturbance = {1.0, peak.omega, 1.0, 40.0};
  const auto r = simulate(cfg);
  const double expect = peak.value;
  for (int i = 2; i + 1 < cfg.n; ++i) {
    const double ratio = window_amplitude(r, i + 1, 32.0, 40.0) /
                         window_amplitude(r, i, 32.0, 40.0);
    CHECK(ratio == doctest::Approx(expect).epsilon(0.05));
  }
}

TEST_CASE("verdict classification") {
  SimResult r;
  r.peak_abs_error = {0.0, 1.0, 0.8, 0.6, 0.5};
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);
  r.peak_abs_error = {0.0, 0.5, 0.6, 0.8, 1.0};
  CHECK(amplification_verdict(r) == TrendVerdict::Amplifying);
  r.peak_abs_error = {0.0, 0.5, 1.0, 0.4, 0.3};
  CHECK(amplification_verdict(r) == TrendVerdict::Mixed);
  r.peak_abs_error = {0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);
  // a 1% wiggle is absorbed by the default tolerance
  r.peak_abs_error = {0.0, 1.0, 0.99, 1.0, 0.98};
  CHECK(amplification_verdict(r) == TrendVerdict::Attenuating);
}

TEST_CASE("diverging closed loops are reported, not silently returned") {
  PlatoonConfig cfg;
  cfg.n = 3;
  cfg.spec = ControllerSpec::pf(100.0, 1e-3, 0.0, 0.01, 5.0);
  cfg.lag = {0.5, 0.5};
  cfg.t_end = 40.0;
  CHECK_THROWS_AS(simulate(cfg), SimDivergedError);
}

TEST_CASE("config validation") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = table2_config(1, 0.25, 0.88);
  cfg.disturbance.t_off = 50.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = table2_config(1, 0.25, 0.88);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("trajectory csv layout") {
  PlatoonConfig cfg = table2_config(1, 0.25, 0.88);
  cfg.n = 3;
  cfg.t_end = 0.01;
  cfg.dt = 5e-3;
  cfg.disturbance = {2.0, 1.0, 0.001, 0.01};
  const auto r = simulate(cfg);
  std::ostringstream os;
  write_trajectory_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,vehicle,x,v,a,u,e");
  long rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3 * 3);  // (steps + 1) * vehicles
}

TEST_SUITE_END();
