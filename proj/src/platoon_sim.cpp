#include "platoonlab/platoon_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "platoonlab/errors.hpp"

namespace platoonlab {

void PlatoonConfig::validate() const {
  spec.validate();
  lag.validate();
  if (n < 2) throw Error("platoon: need at least two vehicles");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("platoon: dt must be positive");
  if (!(t_end > 0.0)) throw Error("platoon: t_end must be positive");
  if (!(disturbance.t_on < disturbance.t_off) || !(disturbance.t_off <= t_end))
    throw Error("platoon: need t_on < t_off <= t_end");
  if (!(disturbance.amplitude >= 0.0)) throw Error("platoon: disturbance amplitude must be >= 0");
  if (!(v_ref >= 0.0)) throw Error("platoon: v_ref must be >= 0");
}

std::vector<GainTap> active_taps(const ControllerSpec& spec, int vehicle) {
  std::vector<GainTap> out;
  const int r = spec.max_lag();
  for (const GainTap& tap : spec.taps) {
    if (tap.lag > vehicle) continue;
    if (spec.arch == Architecture::OneAndRth && tap.lag == r && !(vehicle > r)) continue;
    out.push_back(tap);
  }
  return out;
}

std::vector<double> init_equilibrium(const PlatoonConfig& cfg) {
  cfg.validate();
  std::vector<double> state(static_cast<std::size_t>(cfg.n) * 3, 0.0);
  for (int i = 0; i < cfg.n; ++i) {
    state[3 * i] = i == 0 ? 0.0
                          : state[3 * (i - 1)] - cfg.spec.standstill -
                                cfg.spec.headway * cfg.v_ref;
    state[3 * i + 1] = cfg.v_ref;
    state[3 * i + 2] = 0.0;
  }
  return state;
}

namespace {

double lead_accel(const Disturbance& d, double t) {
  if (t < d.t_on || t > d.t_off) return 0.0;
  return d.amplitude * std::sin(d.frequency * (t - d.t_on));
}

struct TapPlan {
  std::vector<std::vector<GainTap>> per_vehicle;
};

TapPlan make_plan(const PlatoonConfig& cfg) {
  TapPlan plan;
  plan.per_vehicle.resize(cfg.n);
  for (int i = 1; i < cfg.n; ++i) plan.per_vehicle[i] = active_taps(cfg.spec, i);
  return plan;
}

// Tap control law for follower i; `stride` is the per-vehicle state width and
// `accel_of` resolves a predecessor's acceleration.
template <typename AccelFn>
double control_input(const PlatoonConfig& cfg, const TapPlan& plan, const std::vector<double>& s,
                     int stride, int i, AccelFn&& accel_of) {
  const double xi = s[stride * i];
  const double vi = s[stride * i + 1];
  double u = 0.0;
  for (const GainTap& tap : plan.per_vehicle[i]) {
    const int j = i - tap.lag;
    const double xj = s[stride * j];
    const double vj = s[stride * j + 1];
    const double aj = accel_of(j);
    const double l = static_cast<double>(tap.lag);
    u += tap.ka * aj - tap.kv * (vi - vj) -
         tap.kp * (xi - xj + l * cfg.spec.standstill + l * cfg.spec.headway * vi);
  }
  return u;
}

void check_finite(const std::vector<double>& s, std::size_t step, double t) {
  for (double v : s)
    if (!std::isfinite(v) || std::abs(v) > 1e12) throw SimDivergedError(step, t);
}

SimResult make_result(const PlatoonConfig& cfg, std::size_t steps) {
  SimResult r;
  r.t.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) r.t[k] = static_cast<double>(k) * cfg.dt;
  r.x.assign(cfg.n, std::vector<double>(steps + 1));
  r.v.assign(cfg.n, std::vector<double>(steps + 1));
  r.a.assign(cfg.n, std::vector<double>(steps + 1));
  r.u.assign(cfg.n, std::vector<double>(steps + 1));
  r.e.assign(cfg.n, std::vector<double>(steps + 1));
  r.peak_abs_error.assign(cfg.n, 0.0);
  return r;
}

void record(const PlatoonConfig& cfg, SimResult& r, std::size_t k, const std::vector<double>& x,
            const std::vector<double>& v, const std::vector<double>& a,
            const std::vector<double>& u) {
  for (int i = 0; i < cfg.n; ++i) {
    r.x[i][k] = x[i];
    r.v[i][k] = v[i];
    r.a[i][k] = a[i];
    r.u[i][k] = u[i];
    double e = 0.0;
    if (i > 0) {
      e = x[i] - x[i - 1] + cfg.spec.standstill + cfg.spec.headway * v[i];
      r.peak_abs_error[i] = std::max(r.peak_abs_error[i], std::abs(e));
    }
    r.e[i][k] = e;
  }
}

SimResult simulate_lagged(const PlatoonConfig& cfg) {
  const TapPlan plan = make_plan(cfg);
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  SimResult result = make_result(cfg, steps);

  std::vector<double> s = init_equilibrium(cfg);
  const int m = cfg.n * 3;
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);

  auto deriv = [&](const std::vector<double>& st, double t, std::vector<double>& out) {
    const double a0 = lead_accel(cfg.disturbance, t);
    out[0] = st[1];
    out[1] = a0;
    out[2] = 0.0;  // lead acceleration is prescribed, not a state
    for (int i = 1; i < cfg.n; ++i) {
      const double ui = control_input(cfg, plan, st, 3, i,
                                      [&](int j) { return j == 0 ? a0 : st[3 * j + 2]; });
      out[3 * i] = st[3 * i + 1];
      out[3 * i + 1] = st[3 * i + 2];
      out[3 * i + 2] = (ui - st[3 * i + 2]) / cfg.lag.tau;
    }
  };

  std::vector<double> xs(cfg.n), vs(cfg.n), as(cfg.n), us(cfg.n);
  auto snapshot = [&](double t) {
    const double a0 = lead_accel(cfg.disturbance, t);
    for (int i = 0; i < cfg.n; ++i) {
      xs[i] = s[3 * i];
      vs[i] = s[3 * i + 1];
      as[i] = i == 0 ? a0 : s[3 * i + 2];
    }
    us[0] = a0;
    for (int i = 1; i < cfg.n; ++i)
      us[i] = control_input(cfg, plan, s, 3, i, [&](int j) { return j == 0 ? a0 : s[3 * j + 2]; });
  };

  snapshot(0.0);
  record(cfg, result, 0, xs, vs, as, us);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = result.t[k];
    const double h = cfg.dt;
    deriv(s, t, k1);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + 0.5 * h * k1[j];
    deriv(tmp, t + 0.5 * h, k2);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + 0.5 * h * k2[j];
    deriv(tmp, t + 0.5 * h, k3);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + h * k3[j];
    deriv(tmp, t + h, k4);
    for (int j = 0; j < m; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    check_finite(s, k + 1, t + h);
    snapshot(t + h);
    record(cfg, result, k + 1, xs, vs, as, us);
  }
  return result;
}

}  // namespace

SimResult simulate_instant_actuation(const PlatoonConfig& cfg) {
  cfg.validate();
  if (cfg.lag.tau != 0.0) throw Error("simulate_instant_actuation: lag.tau must be 0");
  const TapPlan plan = make_plan(cfg);
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  SimResult result = make_result(cfg, steps);

  const int m = cfg.n * 2;
  std::vector<double> s(m);
  {
    const auto full = init_equilibrium(cfg);
    for (int i = 0; i < cfg.n; ++i) {
      s[2 * i] = full[3 * i];
      s[2 * i + 1] = full[3 * i + 1];
    }
  }
  std::vector<double> accel(cfg.n);

  // With instantaneous actuation a_i == u_i; predecessors have lower index,
  // so one forward pass resolves the chain.
  auto fill_accels = [&](const std::vector<double>& st, double t) {
    accel[0] = lead_accel(cfg.disturbance, t);
    for (int i = 1; i < cfg.n; ++i)
      accel[i] = control_input(cfg, plan, st, 2, i, [&](int j) { return accel[j]; });
  };

  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  auto deriv = [&](const std::vector<double>& st, double t, std::vector<double>& out) {
    fill_accels(st, t);
    for (int i = 0; i < cfg.n; ++i) {
      out[2 * i] = st[2 * i + 1];
      out[2 * i + 1] = accel[i];
    }
  };

  std::vector<double> xs(cfg.n), vs(cfg.n), as(cfg.n), us(cfg.n);
  auto snapshot = [&](double t) {
    fill_accels(s, t);
    for (int i = 0; i < cfg.n; ++i) {
      xs[i] = s[2 * i];
      vs[i] = s[2 * i + 1];
      as[i] = accel[i];
      us[i] = accel[i];
    }
  };

  snapshot(0.0);
  record(cfg, result, 0, xs, vs, as, us);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = result.t[k];
    const double h = cfg.dt;
    deriv(s, t, k1);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + 0.5 * h * k1[j];
    deriv(tmp, t + 0.5 * h, k2);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + 0.5 * h * k2[j];
    deriv(tmp, t + 0.5 * h, k3);
    for (int j = 0; j < m; ++j) tmp[j] = s[j] + h * k3[j];
    deriv(tmp, t + h, k4);
    for (int j = 0; j < m; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    check_finite(s, k + 1, t + h);
    snapshot(t + h);
    record(cfg, result, k + 1, xs, vs, as, us);
  }
  return result;
}

SimResult simulate(const PlatoonConfig& cfg) {
  cfg.validate();
  if (cfg.lag.tau == 0.0) return simulate_instant_actuation(cfg);
  return simulate_lagged(cfg);
}

const char* to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::Attenuating: return "Attenuating";
    case TrendVerdict::Amplifying: return "Amplifying";
    case TrendVerdict::Mixed: return "Mixed";
  }
  return "?";
}

TrendVerdict amplification_verdict(const SimResult& result, double tol) {
  const auto& p = result.peak_abs_error;
  const int n = static_cast<int>(p.size());
  if (n < 3) return TrendVerdict::Attenuating;
  double pmax = 0.0;
  for (int i = 1; i < n; ++i) pmax = std::max(pmax, p[i]);
  if (pmax <= 1e-12) return TrendVerdict::Attenuating;
  bool attenuating = true;
  bool amplifying = true;
  for (int i = 1; i + 1 < n; ++i) {
    if (p[i + 1] > (1.0 + tol) * p[i]) attenuating = false;
    if (p[i + 1] < (1.0 - tol) * p[i]) amplifying = false;
  }
  if (attenuating) return TrendVerdict::Attenuating;
  if (amplifying && p[n - 1] > p[1]) return TrendVerdict::Amplifying;
  return TrendVerdict::Mixed;
}

void write_trajectory_csv(std::ostream& os, const SimResult& result) {
  os << "t,vehicle,x,v,a,u,e\n";
  char buf[160];
  const std::size_t steps = result.t.size();
  const std::size_t n = result.x.size();
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.9g,%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", result.t[k], i,
                    result.x[i][k], result.v[i][k], result.a[i][k], result.u[i][k],
                    result.e[i][k]);
      os << buf;
    }
  }
}

}  // namespace platoonlab
