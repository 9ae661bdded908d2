#include "platoonlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "platoonlab/errors.hpp"
#include "platoonlab/headway_bounds.hpp"
#include "platoonlab/impulse_response.hpp"
#include "platoonlab/platoon_sim.hpp"
#include "platoonlab/recipe.hpp"
#include "platoonlab/string_stability.hpp"
#include "platoonlab/transfer_function.hpp"

namespace platoonlab::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Architecture parse_arch(const std::string& s) {
  if (s == "pf") return Architecture::PF;
  if (s == "rpf") return Architecture::RPF;
  if (s == "one-and-rth") return Architecture::OneAndRth;
  throw Error("unknown architecture '" + s + "' (expected pf, rpf or one-and-rth)");
}

Criterion parse_criterion(const std::string& s) {
  if (s == "hinf") return Criterion::HinfSingle;
  if (s == "rho") return Criterion::SpectralRadius;
  if (s == "sum") return Criterion::SumNorm;
  throw Error("unknown criterion '" + s + "' (expected hinf, rho or sum)");
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw Error("config key '" + key + "': cannot parse number '" + value + "'");
  }
  if (used != value.size()) throw Error("config key '" + key + "': trailing junk in '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  if (v != std::floor(v)) throw Error("config key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

ControllerSpec make_spec(Architecture arch, int r, double kp, double kv, double ka, double hw,
                         double d) {
  switch (arch) {
    case Architecture::PF: return ControllerSpec::pf(kp, kv, ka, hw, d);
    case Architecture::RPF: return ControllerSpec::rpf(r, kp, kv, ka, hw, d);
    case Architecture::OneAndRth: return ControllerSpec::one_and_rth(r, kp, kv, ka, hw, d);
  }
  throw Error("unreachable architecture");
}

void require(double value, const char* flag) {
  if (!std::isfinite(value)) throw Error(std::string("missing required value for ") + flag);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open output file '" + path + "'");
  return f;
}

// Picks the recipe to apply: the named one, or the first whose `command`
// entry matches the subcommand.
const ExperimentRecipe& choose_recipe(const std::vector<ExperimentRecipe>& recipes,
                                      const std::string& name, const std::string& command) {
  if (!name.empty()) {
    for (const auto& r : recipes)
      if (r.name == name) return r;
    throw Error("recipe '" + name + "' not found in config file");
  }
  for (const auto& r : recipes) {
    const std::string* cmd = r.find("command");
    if (cmd && *cmd == command) return r;
  }
  if (recipes.size() == 1) return recipes.front();
  throw Error("config file has no recipe with command = " + command);
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string arch = "pf";
  int r = 1;
  double kp = kUnset, kv = kUnset, ka = 0.0, hw = kUnset, tau0 = kUnset;
  double d = 5.0;
  std::string criterion = "sum";
  int tau_grid = 33;
  std::string out_path;
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  require(opt.kp, "--kp");
  require(opt.kv, "--kv");
  require(opt.hw, "--hw");
  require(opt.tau0, "--tau0");
  const Architecture arch = parse_arch(opt.arch);
  check_accel_gain_interval(arch, arch == Architecture::PF ? 1 : opt.r, opt.ka);
  const ControllerSpec spec = make_spec(arch, opt.r, opt.kp, opt.kv, opt.ka, opt.hw, opt.d);
  SweepConfig cfg;
  cfg.tau_grid_points = opt.tau_grid;
  const StabilityReport report =
      robust_check(spec, opt.tau0, cfg, parse_criterion(opt.criterion));

  std::ostringstream text;
  text << "architecture  " << to_string(arch) << " (r=" << spec.max_lag() << ")\n"
       << "gains         kp=" << g9(opt.kp) << " kv=" << g9(opt.kv) << " ka=" << g9(opt.ka) << "\n"
       << "headway       " << g9(opt.hw) << " s\n"
       << "tau0          " << g9(opt.tau0) << " s\n"
       << "criterion     " << to_string(report.criterion) << "\n"
       << "worst value   " << g9(report.worst_value) << "\n"
       << "worst omega   " << g9(report.worst_omega) << " rad/s\n"
       << "worst tau     " << g9(report.worst_tau) << " s\n"
       << "verdict       " << to_string(report.verdict) << "\n";
  out << text.str();
  if (!opt.out_path.empty()) open_output(opt.out_path) << text.str();
  return report.verdict == Verdict::RobustlyStringStable ? 0 : 2;
}

// ----------------------------------------------------------------- bounds

struct BoundsOptions {
  double tau0 = kUnset;
  std::string r_spec = "1";
  std::string ka_spec = "0";
  std::string out_path;
};

std::vector<int> parse_int_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {parse_int("--r", s)};
  const int lo = parse_int("--r", s.substr(0, colon));
  const int hi = parse_int("--r", s.substr(colon + 1));
  if (hi < lo) throw Error("--r range must be ascending");
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<double> parse_double_range(const std::string& s) {
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) return {parse_number("--ka", s)};
  const auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Error("--ka range must be start:step:end");
  const double lo = parse_number("--ka", s.substr(0, c1));
  const double step = parse_number("--ka", s.substr(c1 + 1, c2 - c1 - 1));
  const double hi = parse_number("--ka", s.substr(c2 + 1));
  if (!(step > 0.0) || hi < lo) throw Error("--ka range must be start:step:end with step > 0");
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
  return out;
}

int cmd_bounds(const BoundsOptions& opt, std::ostream& out) {
  require(opt.tau0, "--tau0");
  const bool ranged = opt.r_spec.find(':') != std::string::npos ||
                      opt.ka_spec.find(':') != std::string::npos;
  const std::vector<int> rs = parse_int_range(opt.r_spec);
  const std::vector<double> kas = parse_double_range(opt.ka_spec);

  std::ostringstream text;
  auto emit = [&](const HeadwayBound& b) {
    if (ranged)
      text << to_string(b.arch) << ',' << b.r << ',' << g9(b.ka) << ',' << g9(b.h_min) << '\n';
    else
      text << to_string(b.arch) << "\tr=" << b.r << "\tka=" << g9(b.ka) << "\th_min="
           << g9(b.h_min) << '\n';
  };
  if (ranged) text << "arch,r,ka,h_min\n";

  long rows = 0;
  for (double ka : kas) {
    if (ka < 1.0) {
      emit(min_headway(Architecture::PF, 1, ka, opt.tau0));
      ++rows;
    }
    for (int r : rs) {
      if (r >= 1 && r * ka < 1.0) {
        emit(min_headway(Architecture::RPF, r, ka, opt.tau0));
        ++rows;
      }
      if (r >= 2 && 2.0 * ka < 1.0) {
        emit(min_headway(Architecture::OneAndRth, r, ka, opt.tau0));
        ++rows;
      }
    }
  }
  if (rows == 0) throw GainRangeError("no architecture admits the requested gains");
  out << text.str();
  if (!opt.out_path.empty()) open_output(opt.out_path) << text.str();
  return 0;
}

// ------------------------------------------------------------- synthesize

struct SynthesizeOptions {
  double ka = kUnset, eta = kUnset, tau0 = kUnset;
  bool verify = true;
  std::string out_path;
  std::string config_path, recipe_name;
};

void apply_recipe(SynthesizeOptions& opt, const ExperimentRecipe& recipe) {
  for (const auto& [k, v] : recipe.entries) {
    if (k == "command") {
      if (v != "synthesize") throw Error("recipe command is '" + v + "', expected synthesize");
    } else if (k == "ka") opt.ka = parse_number(k, v);
    else if (k == "eta") opt.eta = parse_number(k, v);
    else if (k == "tau0") opt.tau0 = parse_number(k, v);
    else if (k == "verify") opt.verify = parse_int(k, v) != 0;
    else if (k == "out") opt.out_path = v;
    else throw Error("unknown config key '" + k + "' for synthesize");
  }
}

int cmd_synthesize(SynthesizeOptions opt, std::ostream& out) {
  if (!opt.config_path.empty())
    apply_recipe(opt, choose_recipe(load_recipes(opt.config_path), opt.recipe_name, "synthesize"));
  require(opt.ka, "--ka");
  require(opt.eta, "--eta");
  require(opt.tau0, "--tau0");
  const SynthesisResult s = synthesize_gains(opt.ka, opt.eta, opt.tau0);

  std::ostringstream text;
  text << "kp            " << g9(s.kp) << "\n"
       << "kv            " << g9(s.kv) << "\n"
       << "headway       " << g9(s.headway) << " s\n"
       << "region        a1=" << g9(s.region.a1) << " b1=" << g9(s.region.b1)
       << " a2=" << g9(s.region.a2) << " b2=" << g9(s.region.b2) << "\n";
  int code = 0;
  if (opt.verify) {
    const ControllerSpec spec = ControllerSpec::pf(s.kp, s.kv, opt.ka, s.headway);
    const StabilityReport report = robust_check(spec, opt.tau0);
    text << "verified      " << to_string(report.verdict) << " (worst "
         << g9(report.worst_value) << ")\n";
    code = report.verdict == Verdict::RobustlyStringStable ? 0 : 2;
  }
  out << text.str();
  if (!opt.out_path.empty()) open_output(opt.out_path) << text.str();
  return code;
}

// ------------------------------------------------------------------- nnir

struct NnirOptions {
  double ka = kUnset;
  double hw_scaled = kUnset;  ///< defaults to 2/(1+ka)
  RegionGridSpec grid;
  int tau_samples = 21;
  std::string out_path;
  std::string config_path, recipe_name;
};

void apply_recipe(NnirOptions& opt, const ExperimentRecipe& recipe) {
  for (const auto& [k, v] : recipe.entries) {
    if (k == "command") {
      if (v != "nnir") throw Error("recipe command is '" + v + "', expected nnir");
    } else if (k == "ka") opt.ka = parse_number(k, v);
    else if (k == "hw-scaled") opt.hw_scaled = parse_number(k, v);
    else if (k == "kp-min") opt.grid.kp_min = parse_number(k, v);
    else if (k == "kp-max") opt.grid.kp_max = parse_number(k, v);
    else if (k == "kv-min") opt.grid.kv_min = parse_number(k, v);
    else if (k == "kv-max") opt.grid.kv_max = parse_number(k, v);
    else if (k == "nkp") opt.grid.n_kp = parse_int(k, v);
    else if (k == "nkv") opt.grid.n_kv = parse_int(k, v);
    else if (k == "tau-samples") opt.tau_samples = parse_int(k, v);
    else if (k == "out") opt.out_path = v;
    else throw Error("unknown config key '" + k + "' for nnir");
  }
}

int cmd_nnir(NnirOptions opt, std::ostream& out, std::ostream& err) {
  if (!opt.config_path.empty())
    apply_recipe(opt, choose_recipe(load_recipes(opt.config_path), opt.recipe_name, "nnir"));
  require(opt.ka, "--ka");
  if (!std::isfinite(opt.hw_scaled)) opt.hw_scaled = 2.0 / (1.0 + opt.ka);
  if (opt.tau_samples < 2) throw Error("--tau-samples must be >= 2");
  std::vector<double> taus(opt.tau_samples);
  for (int i = 0; i < opt.tau_samples; ++i)
    taus[i] = static_cast<double>(i) / (opt.tau_samples - 1);

  const RegionScanResult scan = region_scan(opt.ka, opt.hw_scaled, opt.grid, taus);
  const std::string summary =
      "admissible cells " + std::to_string(scan.admissible_count()) + " of " +
      std::to_string(scan.cells.size()) + " (ka=" + g9(opt.ka) + ", hw-scaled=" +
      g9(opt.hw_scaled) + ")\n";
  if (opt.out_path.empty()) {
    write_region_csv(out, scan);
    err << summary;
  } else {
    auto f = open_output(opt.out_path);
    write_region_csv(f, scan);
    out << summary;
  }
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string arch = "rpf";
  int r = 1;
  double kp = kUnset, kv = kUnset, ka = 0.0, hw = kUnset;
  double tau = kUnset, tau0 = kUnset;
  int n = 15;
  double d = 5.0, vr = 20.0;
  double amp = 2.0, freq = 1.0, t_on = 5.0, t_off = 10.0;
  double dt = 1e-3, t_end = 40.0;
  std::string out_path;
  std::string config_path, recipe_name;
};

void apply_recipe(SimulateOptions& opt, const ExperimentRecipe& recipe) {
  for (const auto& [k, v] : recipe.entries) {
    if (k == "command") {
      if (v != "simulate") throw Error("recipe command is '" + v + "', expected simulate");
    } else if (k == "arch") opt.arch = v;
    else if (k == "r") opt.r = parse_int(k, v);
    else if (k == "kp") opt.kp = parse_number(k, v);
    else if (k == "kv") opt.kv = parse_number(k, v);
    else if (k == "ka") opt.ka = parse_number(k, v);
    else if (k == "hw") opt.hw = parse_number(k, v);
    else if (k == "tau") opt.tau = parse_number(k, v);
    else if (k == "tau0") opt.tau0 = parse_number(k, v);
    else if (k == "n") opt.n = parse_int(k, v);
    else if (k == "d") opt.d = parse_number(k, v);
    else if (k == "vr") opt.vr = parse_number(k, v);
    else if (k == "amp") opt.amp = parse_number(k, v);
    else if (k == "freq") opt.freq = parse_number(k, v);
    else if (k == "t-on") opt.t_on = parse_number(k, v);
    else if (k == "t-off") opt.t_off = parse_number(k, v);
    else if (k == "dt") opt.dt = parse_number(k, v);
    else if (k == "t-end") opt.t_end = parse_number(k, v);
    else if (k == "out") opt.out_path = v;
    else throw Error("unknown config key '" + k + "' for simulate");
  }
}

PlatoonConfig to_config(const SimulateOptions& opt) {
  require(opt.kp, "--kp");
  require(opt.kv, "--kv");
  require(opt.hw, "--hw");
  require(opt.tau, "--tau");
  PlatoonConfig cfg;
  cfg.n = opt.n;
  cfg.spec = make_spec(parse_arch(opt.arch), opt.r, opt.kp, opt.kv, opt.ka, opt.hw, opt.d);
  cfg.lag.tau = opt.tau;
  cfg.lag.tau0 = std::isfinite(opt.tau0) ? opt.tau0 : std::max(opt.tau, 0.5);
  cfg.v_ref = opt.vr;
  cfg.disturbance = {opt.amp, opt.freq, opt.t_on, opt.t_off};
  cfg.dt = opt.dt;
  cfg.t_end = opt.t_end;
  return cfg;
}

int cmd_simulate(SimulateOptions opt, std::ostream& out) {
  if (!opt.config_path.empty())
    apply_recipe(opt, choose_recipe(load_recipes(opt.config_path), opt.recipe_name, "simulate"));
  const PlatoonConfig cfg = to_config(opt);
  const SimResult result = simulate(cfg);
  if (!opt.out_path.empty()) {
    auto f = open_output(opt.out_path);
    write_trajectory_csv(f, result);
  }
  out << "vehicle\tpeak_abs_error\n";
  for (int i = 1; i < cfg.n; ++i) out << i << '\t' << g9(result.peak_abs_error[i]) << '\n';
  out << "verdict\t" << to_string(amplification_verdict(result)) << '\n';
  return 0;
}

// ----------------------------------------------------------------- table3

struct Table3Options {
  double tau0 = 0.5, tau = kUnset;
  double kp = 45.0, kv = 0.8;
  int n = 15;
  double d = 5.0, vr = 20.0;
  double amp = 2.0, freq = 1.0, t_on = 5.0, t_off = 10.0;
  double dt = 1e-3, t_end = 40.0;
  std::string out_path;
  std::string config_path, recipe_name;
};

void apply_recipe(Table3Options& opt, const ExperimentRecipe& recipe) {
  for (const auto& [k, v] : recipe.entries) {
    if (k == "command") {
      if (v != "table3") throw Error("recipe command is '" + v + "', expected table3");
    } else if (k == "tau0") opt.tau0 = parse_number(k, v);
    else if (k == "tau") opt.tau = parse_number(k, v);
    else if (k == "kp") opt.kp = parse_number(k, v);
    else if (k == "kv") opt.kv = parse_number(k, v);
    else if (k == "n") opt.n = parse_int(k, v);
    else if (k == "d") opt.d = parse_number(k, v);
    else if (k == "vr") opt.vr = parse_number(k, v);
    else if (k == "amp") opt.amp = parse_number(k, v);
    else if (k == "freq") opt.freq = parse_number(k, v);
    else if (k == "t-on") opt.t_on = parse_number(k, v);
    else if (k == "t-off") opt.t_off = parse_number(k, v);
    else if (k == "dt") opt.dt = parse_number(k, v);
    else if (k == "t-end") opt.t_end = parse_number(k, v);
    else if (k == "out") opt.out_path = v;
    else throw Error("unknown config key '" + k + "' for table3");
  }
}

struct Table3Row {
  int r;
  double ka;
  double hw_a;
  double hw_b;
};

// The five simulated cases: headway column (a) respects the bound, (b)
// violates it.
constexpr Table3Row kTable3Rows[] = {
    {1, 0.25, 0.88, 0.68}, {2, 0.0, 0.8, 0.63},  {2, 0.25, 0.68, 0.4},
    {3, 0.0, 0.6, 0.47},   {3, 0.25, 0.5, 0.27},
};

int cmd_table3(Table3Options opt, std::ostream& out) {
  if (!opt.config_path.empty())
    apply_recipe(opt, choose_recipe(load_recipes(opt.config_path), opt.recipe_name, "table3"));
  const double tau = std::isfinite(opt.tau) ? opt.tau : opt.tau0;

  std::ostringstream text;
  text << "r\tka\th_min\th_w(a)\tverdict(a)\th_w(b)\tverdict(b)\n";
  bool as_expected = true;
  for (const Table3Row& row : kTable3Rows) {
    const double h_min = min_headway(Architecture::RPF, row.r, row.ka, opt.tau0).h_min;
    TrendVerdict verdicts[2];
    double first_peak[2] = {0, 0}, last_peak[2] = {0, 0};
    const double headways[2] = {row.hw_a, row.hw_b};
    for (int side = 0; side < 2; ++side) {
      PlatoonConfig cfg;
      cfg.n = opt.n;
      cfg.spec = ControllerSpec::rpf(row.r, opt.kp, opt.kv, row.ka, headways[side], opt.d);
      cfg.lag = {tau, std::max(opt.tau0, tau)};
      cfg.v_ref = opt.vr;
      cfg.disturbance = {opt.amp, opt.freq, opt.t_on, opt.t_off};
      cfg.dt = opt.dt;
      cfg.t_end = opt.t_end;
      const SimResult result = simulate(cfg);
      verdicts[side] = amplification_verdict(result);
      first_peak[side] = result.peak_abs_error[1];
      last_peak[side] = result.peak_abs_error[cfg.n - 1];
    }
    const bool a_ok = verdicts[0] == TrendVerdict::Attenuating;
    const bool b_ok = verdicts[1] == TrendVerdict::Amplifying ||
                      (verdicts[1] == TrendVerdict::Mixed && last_peak[1] >= 1.1 * first_peak[1]);
    as_expected = as_expected && a_ok && b_ok;
    text << row.r << '\t' << g9(row.ka) << '\t' << g9(h_min) << '\t' << g9(row.hw_a) << '\t'
         << to_string(verdicts[0]) << '\t' << g9(row.hw_b) << '\t' << to_string(verdicts[1])
         << '\n';
  }
  text << (as_expected ? "all rows match the expected verdict pattern\n"
                       : "verdict pattern deviates from the expected one\n");
  out << text.str();
  if (!opt.out_path.empty()) open_output(opt.out_path) << text.str();
  return as_expected ? 0 : 2;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"robust string stability analysis of vehicle platoons"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "robust string stability verdict");
  analyze->add_option("--arch", an.arch, "pf | rpf | one-and-rth");
  analyze->add_option("--r", an.r, "predecessor count");
  analyze->add_option("--kp", an.kp, "position gain");
  analyze->add_option("--kv", an.kv, "velocity gain");
  analyze->add_option("--ka", an.ka, "acceleration gain");
  analyze->add_option("--hw", an.hw, "time headway [s]");
  analyze->add_option("--tau0", an.tau0, "lag bound [s]");
  analyze->add_option("--d", an.d, "standstill distance [m]");
  analyze->add_option("--criterion", an.criterion, "hinf | rho | sum");
  analyze->add_option("--tau-grid", an.tau_grid, "lag grid points");
  analyze->add_option("--out", an.out_path, "also write the report to a file");

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "minimum employable time headway");
  bounds->add_option("--tau0", bo.tau0, "lag bound [s]");
  bounds->add_option("--r", bo.r_spec, "predecessor count, or lo:hi range");
  bounds->add_option("--ka", bo.ka_spec, "acceleration gain, or lo:step:hi range");
  bounds->add_option("--out", bo.out_path, "also write the table to a file");

  SynthesizeOptions sy;
  auto* synth = app.add_subcommand("synthesize", "stabilizing (kp, kv) for a margin eta");
  synth->add_option("--ka", sy.ka, "acceleration gain in (0,1)");
  synth->add_option("--eta", sy.eta, "headway margin > 0");
  synth->add_option("--tau0", sy.tau0, "lag bound [s]");
  synth->add_flag("--verify,!--no-verify", sy.verify, "re-check the gains with the sweep");
  synth->add_option("--out", sy.out_path, "also write the result to a file");
  synth->add_option("--config", sy.config_path, "recipe file");
  synth->add_option("--recipe", sy.recipe_name, "recipe name");

  NnirOptions nn;
  auto* nnir = app.add_subcommand("nnir", "non-negative impulse response gain scan");
  nnir->add_option("--ka", nn.ka, "acceleration gain");
  nnir->add_option("--hw-scaled", nn.hw_scaled, "scaled headway (default 2/(1+ka))");
  nnir->add_option("--kp-min", nn.grid.kp_min, "scaled kp lower edge");
  nnir->add_option("--kp-max", nn.grid.kp_max, "scaled kp upper edge");
  nnir->add_option("--kv-min", nn.grid.kv_min, "scaled kv lower edge");
  nnir->add_option("--kv-max", nn.grid.kv_max, "scaled kv upper edge");
  nnir->add_option("--nkp", nn.grid.n_kp, "kp axis resolution");
  nnir->add_option("--nkv", nn.grid.n_kv, "kv axis resolution");
  nnir->add_option("--tau-samples", nn.tau_samples, "scaled lag samples on [0,1]");
  nnir->add_option("--out", nn.out_path, "CSV path (default stdout)");
  nnir->add_option("--config", nn.config_path, "recipe file");
  nnir->add_option("--recipe", nn.recipe_name, "recipe name");

  SimulateOptions si;
  auto* sim = app.add_subcommand("simulate", "fixed-step platoon simulation");
  sim->add_option("--arch", si.arch, "pf | rpf | one-and-rth");
  sim->add_option("--r", si.r, "predecessor count");
  sim->add_option("--kp", si.kp, "position gain");
  sim->add_option("--kv", si.kv, "velocity gain");
  sim->add_option("--ka", si.ka, "acceleration gain");
  sim->add_option("--hw", si.hw, "time headway [s]");
  sim->add_option("--tau", si.tau, "actuation lag [s]");
  sim->add_option("--tau0", si.tau0, "lag bound [s]");
  sim->add_option("--n", si.n, "vehicle count");
  sim->add_option("--d", si.d, "standstill distance [m]");
  sim->add_option("--vr", si.vr, "reference speed [m/s]");
  sim->add_option("--amp", si.amp, "disturbance amplitude [m/s^2]");
  sim->add_option("--freq", si.freq, "disturbance frequency [rad/s]");
  sim->add_option("--t-on", si.t_on, "disturbance start [s]");
  sim->add_option("--t-off", si.t_off, "disturbance end [s]");
  sim->add_option("--dt", si.dt, "step size [s]");
  sim->add_option("--t-end", si.t_end, "duration [s]");
  sim->add_option("--out", si.out_path, "trajectory CSV path");
  sim->add_option("--config", si.config_path, "recipe file");
  sim->add_option("--recipe", si.recipe_name, "recipe name");

  Table3Options t3;
  auto* table3 = app.add_subcommand("table3", "five-case verdict matrix at both headways");
  table3->add_option("--tau0", t3.tau0, "lag bound [s]");
  table3->add_option("--tau", t3.tau, "simulated lag (default tau0)");
  table3->add_option("--kp", t3.kp, "position gain");
  table3->add_option("--kv", t3.kv, "velocity gain");
  table3->add_option("--n", t3.n, "vehicle count");
  table3->add_option("--d", t3.d, "standstill distance [m]");
  table3->add_option("--vr", t3.vr, "reference speed [m/s]");
  table3->add_option("--amp", t3.amp, "disturbance amplitude [m/s^2]");
  table3->add_option("--freq", t3.freq, "disturbance frequency [rad/s]");
  table3->add_option("--t-on", t3.t_on, "disturbance start [s]");
  table3->add_option("--t-off", t3.t_off, "disturbance end [s]");
  table3->add_option("--dt", t3.dt, "step size [s]");
  table3->add_option("--t-end", t3.t_end, "duration [s]");
  table3->add_option("--out", t3.out_path, "also write the matrix to a file");
  table3->add_option("--config", t3.config_path, "recipe file");
  table3->add_option("--recipe", t3.recipe_name, "recipe name");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(an, out);
    if (bounds->parsed()) return cmd_bounds(bo, out);
    if (synth->parsed()) return cmd_synthesize(sy, out);
    if (nnir->parsed()) return cmd_nnir(nn, out, err);
    if (sim->parsed()) return cmd_simulate(si, out);
    if (table3->parsed()) return cmd_table3(t3, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no subcommand given\n";
  return 1;
}

}  // namespace platoonlab::cli
