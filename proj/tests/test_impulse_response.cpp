#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "platoonlab/errors.hpp"
#include "platoonlab/impulse_response.hpp"
#include "platoonlab/string_stability.hpp"

using namespace platoonlab;

namespace {

// The worked admissible gain set: ka = 0.95, scaled (kv, kp) = (0.082, 0.001)
// at scaled headway 2/(1+ka).
ScaledTf worked_example(double tau) { return {0.95, 0.001, 0.082, 2.0 / 1.95, tau}; }

}  // namespace

TEST_SUITE_BEGIN("impulse_response");

TEST_CASE("time scaling by the lag bound") {
  const auto spec = ControllerSpec::pf(0.001, 0.082, 0.95, 1.02);
  const auto ident = time_scale(spec, 1.0, 1.0);
  CHECK(ident.kp == 0.001);
  CHECK(ident.kv == 0.082);
  CHECK(ident.hw == 1.02);
  CHECK(ident.tau == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> kp(0.01, 50.0), kv(0.01, 5.0), ka(0.0, 0.99),
      hw(0.1, 3.0), tau0d(0.1, 2.5), frac(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t0 = tau0d(rng);
    const auto original = ControllerSpec::pf(kp(rng), kv(rng), ka(rng), hw(rng));
    const auto scaled = time_scale(original, frac(rng) * t0, t0);
    const auto back = unscale(scaled, t0);
    CHECK(back.taps[0].kp == doctest::Approx(original.taps[0].kp).epsilon(1e-12));
    CHECK(back.taps[0].kv == doctest::Approx(original.taps[0].kv).epsilon(1e-12));
    CHECK(back.headway == doctest::Approx(original.headway).epsilon(1e-12));
    CHECK(scaled.tau >= 0.0);
    CHECK(scaled.tau <= 1.0);
  }
}

TEST_CASE("impulse response survives the time scaling") {
  const double tau0 = 0.5, tau = 0.3;
  const auto spec = ControllerSpec::pf(45.0, 0.8, 0.25, 0.88);
  const auto plain = build_error_tf_accel(spec, {tau, tau0});
  const auto scaled = scaled_error_tf(time_scale(spec, tau, tau0));
  const double dt = 1e-3, t_max = 6.0;
  const auto h = impulse_numeric(plain, t_max, dt);
  const auto hs = impulse_numeric(scaled, t_max / tau0, dt / tau0);
  REQUIRE(h.t.size() == hs.t.size());
  for (std::size_t i = 0; i < h.t.size(); i += 37)
    CHECK(h.h[i] == doctest::Approx(hs.h[i] / tau0).epsilon(1e-6));
}

TEST_CASE("cubic root extraction") {
  // (s+1)(s+2)(s+3)
  const double den[4] = {6.0, 11.0, 6.0, 1.0};
  const auto p = cubic_poles(den);
  REQUIRE(p.has_value());
  CHECK(p->p1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p->p2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p->p3 == doctest::Approx(3.0).epsilon(1e-12));

  // complex pair: (s+1)(s^2+s+1)
  const double complex_pair[4] = {1.0, 2.0, 2.0, 1.0};
  CHECK_FALSE(cubic_poles(complex_pair).has_value());

  // repeated root: (s+1)^2 (s+2)
  const double repeated[4] = {2.0, 5.0, 4.0, 1.0};
  CHECK_FALSE(cubic_poles(repeated).has_value());

  const double wrong_degree[3] = {1.0, 2.0, 1.0};
  CHECK_THROWS_AS(cubic_poles(wrong_degree), Error);
}

TEST_CASE("constructed factorizations round-trip through the solver") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> root(0.02, 8.0), lead(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double a = root(rng), b = root(rng), c = root(rng);
    if (std::abs(a - b) < 1e-3 || std::abs(b - c) < 1e-3 || std::abs(a - c) < 1e-3) continue;
    const double l = lead(rng);
    const double den[4] = {l * a * b * c, l * (a * b + b * c + a * c), l * (a + b + c), l};
    const auto p = cubic_poles(den);
    REQUIRE(p.has_value());
    double sorted[3] = {a, b, c};
    std::sort(sorted, sorted + 3);
    CHECK(p->p1 == doctest::Approx(sorted[0]).epsilon(1e-9));
    CHECK(p->p2 == doctest::Approx(sorted[1]).epsilon(1e-9));
    CHECK(p->p3 == doctest::Approx(sorted[2]).epsilon(1e-9));
  }
}

TEST_CASE("worked gains keep real distinct poles across the lag range") {
  for (double tau : default_tau_samples()) {
    if (tau == 0.0) continue;
    const auto tf = scaled_error_tf(worked_example(tau));
    CHECK(cubic_poles(tf.den).has_value());
  }
}

TEST_CASE("zero-lag non-negativity condition") {
  CHECK(nnir_tau_zero({0.95, 0.001, 0.082, 1.02, 0.0}));
  CHECK(nnir_tau_zero(worked_example(0.0)));
  // middle term diverges as ka -> 1
  CHECK_FALSE(nnir_tau_zero({0.999999, 0.001, 0.082, 1.02, 0.0}));
  // constructed boundary: poles 1 and 2, mid lands exactly on p1
  CHECK(nnir_tau_zero({0.5, 2.0, 2.5, 0.25, 0.0}));
  // complex zero pair is rejected, not an error
  CHECK_FALSE(nnir_tau_zero({0.95, 1.0, 0.01, 1.02, 0.0}));
}

TEST_CASE("positive-lag residue condition on the worked gains") {
  const auto verdict = nnir_tau_positive(worked_example(1.0));
  REQUIRE(verdict.has_value());
  CHECK(*verdict);
  for (double tau : {0.05, 0.3, 0.6, 0.9}) {
    const auto v = nnir_tau_positive(worked_example(tau));
    REQUIRE(v.has_value());
    CHECK(*v);
  }
  CHECK_THROWS_AS(nnir_tau_positive(worked_example(0.0)), Error);
}

TEST_CASE("residues sum to the numerator lead over the denominator lead") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> kp(1e-4, 0.01), kv(0.02, 0.3), ka(0.1, 0.95),
      tau(0.05, 1.0);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 60; ++trial) {
    const ScaledTf s{ka(rng), kp(rng), kv(rng), 1.2, tau(rng)};
    const auto pr = pole_residue_form(s);
    if (!pr) continue;
    CHECK(pr->c1 + pr->c2 + pr->c3 == doctest::Approx(s.ka / s.tau).epsilon(1e-8));
    CHECK(pr->poles.p1 > 0.0);
    CHECK(pr->poles.p1 < pr->poles.p2);
    CHECK(pr->poles.p2 < pr->poles.p3);
    ++tested;
  }
  CHECK(tested >= 60);
}

TEST_CASE("gains outside the admissible region fail the residue condition") {
  // Chosen from a rejected cell of the default scan; verified below against
  // the direct impulse evaluation.
  const ScaledTf outside{0.95, 0.01, 0.3, 2.0 / 1.95, 1.0};
  const auto verdict = nnir_tau_positive(outside);
  REQUIRE(verdict.has_value());
  CHECK_FALSE(*verdict);
}

TEST_CASE("default region scan matches the worked gain pair") {
  const auto scan = region_scan(0.95, 2.0 / 1.95);
  CHECK(scan.admissible_count() > 0);

  // the grid cell closest to (kp, kv) = (0.001, 0.082) must be admissible
  int best_kp = 0, best_kv = 0;
  for (std::size_t i = 0; i < scan.kp.size(); ++i)
    if (std::abs(std::log10(scan.kp[i] / 0.001)) < std::abs(std::log10(scan.kp[best_kp] / 0.001)))
      best_kp = static_cast<int>(i);
  for (std::size_t j = 0; j < scan.kv.size(); ++j)
    if (std::abs(std::log10(scan.kv[j] / 0.082)) < std::abs(std::log10(scan.kv[best_kv] / 0.082)))
      best_kv = static_cast<int>(j);
  CHECK(scan.kp[best_kp] == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(scan.at(best_kp, best_kv).admissible());

  // admissible is the conjunction of the three labels by construction
  for (const auto& cell : scan.cells) {
    if (cell.admissible()) {
      CHECK(cell.cond_tau_zero);
      CHECK(cell.real_distinct);
      CHECK(cell.cond_tau_positive);
    }
  }
}

TEST_CASE("region scan is independent of the execution mode") {
  RegionGridSpec grid;
  grid.n_kp = 13;
  grid.n_kv = 9;
  const auto par = region_scan(0.95, 2.0 / 1.95, grid, {}, Execution::parallel);
  const auto ser = region_scan(0.95, 2.0 / 1.95, grid, {}, Execution::serial);
  REQUIRE(par.cells.size() == ser.cells.size());
  for (std::size_t i = 0; i < par.cells.size(); ++i) {
    CHECK(par.cells[i].cond_tau_zero == ser.cells[i].cond_tau_zero);
    CHECK(par.cells[i].real_distinct == ser.cells[i].real_distinct);
    CHECK(par.cells[i].cond_tau_positive == ser.cells[i].cond_tau_positive);
  }
}

TEST_CASE("empty ranges give an empty grid") {
  RegionGridSpec grid;
  grid.n_kp = 0;
  const auto scan = region_scan(0.95, 1.02, grid);
  CHECK(scan.cells.empty());
  CHECK(scan.admissible_count() == 0);
}

TEST_CASE("scan labels only depend on the scaled gains") {
  const auto scan = region_scan(0.95, 2.0 / 1.95);
  for (std::size_t i = 0; i < scan.kp.size(); i += 10) {
    for (std::size_t j = 0; j < scan.kv.size(); j += 10) {
      const ScaledTf cell{0.95, scan.kp[i], scan.kv[j], 2.0 / 1.95, 0.0};
      // unscale with an arbitrary bound and rescale: labels must not move
      for (double tau0 : {0.25, 0.7, 1.9}) {
        const auto rescaled = time_scale(unscale(cell, tau0), 0.0, tau0);
        CHECK(nnir_tau_zero(rescaled) == scan.at(static_cast<int>(i), static_cast<int>(j)).cond_tau_zero);
      }
    }
  }
}

TEST_CASE("region csv format") {
  RegionGridSpec grid;
  grid.n_kp = 2;
  grid.n_kv = 2;
  const auto scan = region_scan(0.95, 1.02, grid);
  std::ostringstream os;
  write_region_csv(os, scan);
  const std::string text = os.str();
  CHECK(text.rfind("k_tilde_p,k_tilde_v,cond_tau0,real_distinct,cond_tau_pos\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("first-order impulse response is a decaying exponential") {
  const RationalTf tf{{1.0}, {1.0, 1.0}};
  const auto r = impulse_numeric(tf, 10.0, 1e-3);
  CHECK(r.h[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.min_value > 0.0);
  CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.h[1000] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("worked gains yield a non-negative response at half lag") {
  const auto tf = scaled_error_tf(worked_example(0.5));
  const auto r = impulse_numeric(tf, 600.0, 0.05);
  CHECK(r.min_value >= -1e-9);
  CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("rejected gains dip negative in the direct evaluation") {
  const auto tf = scaled_error_tf({0.95, 0.01, 0.3, 2.0 / 1.95, 1.0});
  const auto r = impulse_numeric(tf, 400.0, 0.02);
  CHECK(r.min_value < -1e-6);
}

TEST_CASE("integral recovers the dc gain through the oscillatory path") {
  // complex pole pair forces the integrator branch
  const RationalTf tf{{1.0, 0.3}, {1.0, 1.2, 1.2, 1.0}};
  REQUIRE_FALSE(cubic_poles(tf.den).has_value());
  const auto r = impulse_numeric(tf, 60.0, 1e-3);
  CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("equal-degree functions carry the direct term in the integral") {
  // zero-lag member of the worked example: H(0) = 1 including the impulsive part
  const auto tf = scaled_error_tf(worked_example(0.0));
  REQUIRE(tf.num_degree() == tf.den_degree());
  const auto r = impulse_numeric(tf, 900.0, 0.05);
  CHECK(r.direct_term == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("impulse evaluation refuses unstable denominators") {
  const RationalTf tf{{1.0}, {-1.0, 1.0}};
  CHECK_THROWS_AS(impulse_numeric(tf, 1.0, 1e-2), NonHurwitzError);
}

TEST_CASE("admissible cells have non-negative responses and unit norms") {
  const auto scan = region_scan(0.95, 2.0 / 1.95);
  int checked = 0;
  for (std::size_t i = 0; i < scan.kp.size() && checked < 6; i += 7) {
    for (std::size_t j = 0; j < scan.kv.size() && checked < 6; j += 7) {
      if (!scan.at(static_cast<int>(i), static_cast<int>(j)).admissible()) continue;
      for (double tau : {0.1, 0.5, 1.0}) {
        const ScaledTf s{0.95, scan.kp[i], scan.kv[j], 2.0 / 1.95, tau};
        const auto pr = pole_residue_form(s);
        REQUIRE(pr.has_value());
        const double t_max = 12.0 / pr->poles.p1;
        const auto r = impulse_numeric(scaled_error_tf(s), t_max, t_max / 6000.0);
        CHECK(r.min_value >= -1e-9);
        CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-4));
      }
      // non-negative response makes the peak gain equal the dc gain
      const ScaledTf s{0.95, scan.kp[i], scan.kv[j], 2.0 / 1.95, 0.5};
      CHECK(hinf_norm(scaled_error_tf(s)).value == doctest::Approx(1.0).epsilon(1e-4));
      ++checked;
    }
  }
  CHECK(checked >= 1);
}

TEST_SUITE_END();
