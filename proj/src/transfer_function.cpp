#include "platoonlab/transfer_function.hpp"

#include <algorithm>
#include <cmath>

#include "platoonlab/errors.hpp"

namespace platoonlab {

void RationalTf::trim() {
  while (num.size() > 1 && num.back() == 0.0) num.pop_back();
  while (den.size() > 1 && den.back() == 0.0) den.pop_back();
}

void RationalTf::validate() const {
  if (num.empty() || den.empty()) throw Error("transfer function: empty coefficient list");
  for (double c : num)
    if (!std::isfinite(c)) throw Error("transfer function: non-finite numerator coefficient");
  for (double c : den)
    if (!std::isfinite(c)) throw Error("transfer function: non-finite denominator coefficient");
  if (den.back() == 0.0) throw Error("transfer function: zero denominator leading coefficient");
  if (num_degree() > den_degree()) throw Error("transfer function: improper (num degree > den degree)");
}

const char* to_string(Architecture arch) {
  switch (arch) {
    case Architecture::PF: return "pf";
    case Architecture::RPF: return "rpf";
    case Architecture::OneAndRth: return "one-and-rth";
  }
  return "?";
}

ControllerSpec ControllerSpec::pf(double kp, double kv, double ka, double hw, double d) {
  ControllerSpec s;
  s.arch = Architecture::PF;
  s.taps = {{1, kp, kv, ka}};
  s.headway = hw;
  s.standstill = d;
  return s;
}

ControllerSpec ControllerSpec::rpf(int r, double kp, double kv, double ka, double hw, double d) {
  ControllerSpec s;
  s.arch = Architecture::RPF;
  for (int l = 1; l <= r; ++l) s.taps.push_back({l, kp, kv, ka});
  s.headway = hw;
  s.standstill = d;
  return s;
}

ControllerSpec ControllerSpec::one_and_rth(int r, double kp, double kv, double ka, double hw,
                                           double d) {
  ControllerSpec s;
  s.arch = Architecture::OneAndRth;
  s.taps = {{1, kp, kv, ka}, {r, kp, kv, ka}};
  s.headway = hw;
  s.standstill = d;
  return s;
}

int ControllerSpec::max_lag() const {
  int r = 0;
  for (const auto& t : taps) r = std::max(r, t.lag);
  return r;
}

void ControllerSpec::validate() const {
  if (taps.empty()) throw Error("controller: no gain taps");
  if (!(headway > 0.0) || !std::isfinite(headway))
    throw GainRangeError("controller: time headway must be positive");
  if (!(standstill >= 0.0) || !std::isfinite(standstill))
    throw GainRangeError("controller: standstill distance must be nonnegative");
  int prev = 0;
  for (const auto& t : taps) {
    if (t.lag <= prev) throw Error("controller: tap lag indices must be strictly increasing, >= 1");
    prev = t.lag;
    if (!(t.kp > 0.0)) throw GainRangeError("controller: position gain kp must be positive");
    if (!(t.kv > 0.0)) throw GainRangeError("controller: velocity gain kv must be positive");
    if (!(t.ka >= 0.0)) throw GainRangeError("controller: acceleration gain ka must be nonnegative");
    if (!std::isfinite(t.kp) || !std::isfinite(t.kv) || !std::isfinite(t.ka))
      throw GainRangeError("controller: non-finite gain");
  }
  switch (arch) {
    case Architecture::PF:
      if (taps.size() != 1 || taps[0].lag != 1) throw Error("controller: pf requires a single tap at lag 1");
      break;
    case Architecture::RPF:
      for (std::size_t i = 0; i < taps.size(); ++i)
        if (taps[i].lag != static_cast<int>(i) + 1)
          throw Error("controller: rpf requires contiguous taps at lags 1..r");
      break;
    case Architecture::OneAndRth:
      if (taps.size() != 2 || taps[0].lag != 1 || taps[1].lag < 2)
        throw Error("controller: one-and-rth requires taps at lags {1, r} with r >= 2");
      break;
  }
}

void LagSpec::validate() const {
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw GainRangeError("lag: tau0 must be positive");
  if (!(tau >= 0.0) || !(tau <= tau0)) throw GainRangeError("lag: tau must lie in [0, tau0]");
}

namespace {

RationalTf shared_denominator_tf(const ControllerSpec& spec, const GainTap& tap, double tau) {
  double kp_sum = 0.0;
  double vel_sum = 0.0;
  for (const auto& t : spec.taps) {
    kp_sum += t.kp;
    vel_sum += t.kv + static_cast<double>(t.lag) * t.kp * spec.headway;
  }
  RationalTf tf;
  tf.num = {tap.kp, tap.kv, tap.ka};
  tf.den = {kp_sum, vel_sum, 1.0, tau};
  tf.trim();
  tf.validate();
  return tf;
}

}  // namespace

RationalTf build_error_tf_basic(const ControllerSpec& spec, const LagSpec& lag) {
  spec.validate();
  lag.validate();
  if (spec.arch != Architecture::PF) throw Error("build_error_tf_basic: spec must be pf");
  if (spec.taps[0].ka != 0.0)
    throw Error("build_error_tf_basic: acceleration gain must be zero; use build_error_tf_accel");
  return shared_denominator_tf(spec, spec.taps[0], lag.tau);
}

RationalTf build_error_tf_accel(const ControllerSpec& spec, const LagSpec& lag) {
  spec.validate();
  lag.validate();
  if (spec.arch != Architecture::PF) throw Error("build_error_tf_accel: spec must be pf");
  return shared_denominator_tf(spec, spec.taps[0], lag.tau);
}

std::vector<TapTf> build_error_tf_taps(const ControllerSpec& spec, const LagSpec& lag) {
  spec.validate();
  lag.validate();
  std::vector<TapTf> out;
  out.reserve(spec.taps.size());
  for (const auto& t : spec.taps) out.push_back({t.lag, shared_denominator_tf(spec, t, lag.tau)});
  return out;
}

std::complex<double> eval_s(const RationalTf& tf, std::complex<double> s) {
  auto horner = [&](const std::vector<double>& c) {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
  };
  return horner(tf.num) / horner(tf.den);
}

std::complex<double> eval_jw(const RationalTf& tf, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw Error("eval_jw: omega must be finite and >= 0");
  const std::complex<double> s(0.0, omega);
  auto horner = [&](const std::vector<double>& c) {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
  };
  const std::complex<double> d = horner(tf.den);
  if (std::abs(d) < 1e-300)
    throw NonHurwitzError("eval_jw: denominator vanishes on the imaginary axis");
  return horner(tf.num) / d;
}

}  // namespace platoonlab
