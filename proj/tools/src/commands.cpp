#include "convexreg_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "convexreg/bounds.hpp"
#include "convexreg/cone.hpp"
#include "convexreg/entropy.hpp"
#include "convexreg/error.hpp"
#include "convexreg/misspec.hpp"
#include "convexreg/random.hpp"
#include "convexreg/sim.hpp"
#include "convexreg_cli/csv.hpp"

namespace convexreg::cli {
namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string config;
  std::string out;
  std::size_t threads = 1;
};

struct FitArgs {
  std::string input;
  double tol = 1e-9;
};

struct RiskArgs {
  std::string truth = "x2";
  double sigma = 0.3;
  std::vector<std::size_t> n{50, 100, 200, 400, 800};
  std::size_t reps = 200;
  std::string grid = "uniform";
  std::string summary;
};

struct PackingArgs {
  std::string truth = "x2";
  std::vector<std::size_t> m{4, 8, 16, 32};
  std::size_t n = 4096;
  double a = 0.0;
  double b = 1.0;
  std::optional<double> kappa1;
  std::optional<double> kappa2;
  std::string grid = "uniform";
  std::string summary;
};

struct BoundsArgs {
  double kappa1 = 2.0;
  double kappa2 = 2.0;
  double a = 0.0;
  double b = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double sigma = 1.0;
  std::size_t n = 1000;
  std::string truth = "x2";
  double constant = 1.0;
  std::size_t max_k = 32;
  std::optional<double> r;
};

struct MisspecArgs {
  std::string truth = "concave_parabola";
  std::size_t n = 50;
  std::string grid = "uniform";
  std::size_t trials = 100;
  double tol = 1e-10;
  double affine_tol = 1e-7;
  std::string summary;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<double> parse_numbers(std::string_view list, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string field = trim(list.substr(start, comma - start));
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
      throw InvalidArgument(std::string(what) + ": cannot parse '" + field + "' as a number");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

/// Ids from TruthFunction::known_ids, plus "affine:slope,intercept" and
/// "poly:c0,c1,...".
TruthFunction parse_truth(const std::string& text) {
  if (text.rfind("affine:", 0) == 0) {
    const auto v = parse_numbers(std::string_view(text).substr(7), "truth");
    if (v.size() != 2) throw InvalidArgument("truth: affine needs slope,intercept");
    return TruthFunction::affine(v[0], v[1]);
  }
  if (text.rfind("poly:", 0) == 0) return TruthFunction::polynomial(parse_numbers(std::string_view(text).substr(5), "truth"));
  return TruthFunction::named(text);
}

std::vector<std::pair<std::string, std::string>> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw InvalidArgument(path + ":" + std::to_string(lineno) + ": empty key");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Output sink: the named file, or the fallback stream when the name is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw InvalidArgument("cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

/// "dir/name.csv" -> "dir/name.summary.csv"; empty when out is empty.
std::string summary_path(const std::string& explicit_path, const std::string& out) {
  if (!explicit_path.empty() || out.empty()) return explicit_path;
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".summary.csv";
  return out.substr(0, dot) + ".summary" + out.substr(dot);
}

struct FitInput {
  std::vector<double> x;
  std::vector<double> y;
};

FitInput read_fit_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y") throw InvalidArgument(path + ": header must be 'x,y'");
  FitInput data;
  for (std::size_t row = 1; std::getline(in, line); ++row) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> v;
    try {
      v = parse_numbers(t, "row " + std::to_string(row));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path + ": " + e.what());
    }
    const std::string where = path + ": row " + std::to_string(row);
    if (v.size() != 2) throw InvalidArgument(where + ": expected two fields");
    if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw InvalidArgument(where + ": non-finite value");
    if (v[0] < 0.0 || v[0] > 1.0) throw InvalidArgument(where + ": x outside [0, 1]");
    if (!data.x.empty() && !(v[0] > data.x.back())) throw InvalidArgument(where + ": x not strictly increasing");
    data.x.push_back(v[0]);
    data.y.push_back(v[1]);
  }
  if (data.x.size() < 2) throw InvalidArgument(path + ": need at least two rows");
  return data;
}

int cmd_fit(const Globals& g, const FitArgs& a, std::ostream& out, std::ostream& err) {
  FitInput data = read_fit_input(a.input);
  const DesignGrid grid(data.x);
  ProjectOptions opts;
  opts.tol = a.tol;
  const ConvexFit fit = project(data.y, grid, opts);
  Sink sink(g.out, out);
  *sink << "x,y,fitted\n";
  for (std::size_t i = 0; i < data.x.size(); ++i)
    *sink << format_double(data.x[i]) << ',' << format_double(data.y[i]) << ',' << format_double(fit.theta[i])
          << '\n';
  err << "iterations=" << fit.iterations << " active=" << fit.active.size()
      << " primal_infeasibility=" << format_double(fit.primal_residual)
      << " dual_infeasibility=" << format_double(fit.dual_infeasibility)
      << " complementary_slackness=" << format_double(fit.comp_slack)
      << " stationarity=" << format_double(fit.dual_residual) << '\n';
  return kOk;
}

int cmd_risk(const Globals& g, const RiskArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.truth = parse_truth(a.truth);
  cfg.n_list = a.n;
  cfg.sigma = a.sigma;
  cfg.reps = a.reps;
  cfg.seed = g.seed;
  cfg.grid_kind = parse_grid_kind(a.grid);
  cfg.validate();

  const RiskCurve curve = estimate_risk(cfg, g.threads);
  {
    Sink sink(g.out, out);
    *sink << "n,mean_risk,std_error,reps\n";
    for (const RiskRow& r : curve.rows)
      *sink << r.n << ',' << format_double(r.mean_risk) << ',' << format_double(r.std_error) << ',' << r.reps
            << '\n';
  }
  RateFit rate{std::nan(""), std::nan(""), std::nan("")};
  try {
    rate = rate_exponent(curve);
  } catch (const InvalidArgument&) {
  }
  Sink summary(summary_path(a.summary, g.out), err);
  *summary << "slope,intercept,r_squared\n"
           << format_double(rate.slope) << ',' << format_double(rate.intercept) << ','
           << format_double(rate.r_squared) << '\n';
  return kOk;
}

int cmd_packing(const Globals& g, const PackingArgs& a, std::ostream& out, std::ostream& err) {
  const TruthFunction truth = parse_truth(a.truth);
  if (a.m.empty()) throw InvalidArgument("packing: empty m list");
  CurvatureClass cls{a.a, a.b, 0.0, 0.0};
  if (!(a.a >= 0.0 && a.a < a.b && a.b <= 1.0)) throw InvalidArgument("packing: need 0 <= a < b <= 1");
  const auto curv = truth.curvature(a.a, a.b);
  cls.kappa1 = a.kappa1 ? *a.kappa1 : (curv ? curv->kappa1 : 0.0);
  cls.kappa2 = a.kappa2 ? *a.kappa2 : (curv ? curv->kappa2 : 0.0);
  cls.validate();
  const DesignGrid grid = make_grid(parse_grid_kind(a.grid), a.n, g.seed);
  for (std::size_t m : a.m) {
    if (m < 1) throw InvalidArgument("packing: m must be positive");
    const std::size_t required = packing_required_n(m, grid.c2(), cls);
    if (static_cast<double>(a.n) < 4.0 * static_cast<double>(m) * grid.c2() / (cls.b - cls.a))
      throw PreconditionViolation("packing: n = " + std::to_string(a.n) + " too small for m = " +
                                      std::to_string(m) + "; need n >= " + std::to_string(required),
                                  required);
  }

  std::vector<PackingSet> sets;
  for (std::size_t m : a.m) sets.push_back(build_packing(truth, cls, m, grid, g.seed, g.threads));
  {
    Sink sink(g.out, out);
    *sink << "m,epsilon,code_size,min_pairwise_l2,bound\n";
    for (const PackingSet& s : sets)
      *sink << s.m << ',' << format_double(s.epsilon) << ',' << s.size() << ',' << format_double(s.min_pairwise_l2)
            << ',' << format_double(s.separation_bound) << '\n';
  }
  double slope = std::nan("");
  double intercept = std::nan("");
  if (sets.size() >= 2) {
    const ScalingEstimate est = scaling_estimate(sets);
    slope = est.slope;
    intercept = est.intercept;
  }
  Sink summary(summary_path(a.summary, g.out), err);
  *summary << "slope,intercept\n" << format_double(slope) << ',' << format_double(intercept) << '\n';
  return kOk;
}

int cmd_bounds(const Globals& g, const BoundsArgs& a, std::ostream& out) {
  for (double v : {a.kappa1, a.kappa2, a.c1, a.c2, a.sigma, a.constant})
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("bounds: parameters must be positive");
  if (a.n < 2) throw InvalidArgument("bounds: n must be at least 2");
  const CurvatureClass cls{a.a, a.b, a.kappa1, a.kappa2};
  const LowerBoundReport lb = assouad_lower_bound(cls, a.c1, a.c2, a.sigma, a.n);
  const double radius = neighborhood_radius(a.kappa2, a.c1, a.sigma, a.n);

  const TruthFunction truth = parse_truth(a.truth);
  const SampledFunction phi0 = truth.sample(make_grid(GridKind::uniform, a.n, g.seed));
  EnvelopeParams p = EnvelopeParams::from(phi0, a.sigma, a.constant);
  p.c1 = a.c1;
  const RiskEnvelope rig = risk_envelope_rig1d(p);
  const double adap = risk_envelope_adap(phi0, p, a.max_k);
  const double r = a.r ? *a.r : radius;
  const double eib = entropy_integral_bound(r, phi0, p, a.max_k);

  Sink sink(g.out, out);
  *sink << "assouad=" << format_double(lb.value) << '\n'
        << "valid=" << format_bool(lb.valid) << '\n'
        << "required_n_sq=" << format_double(lb.required_n_sq) << '\n'
        << "radius=" << format_double(radius) << '\n'
        << "R=" << format_double(p.R) << '\n'
        << "rig1d=" << format_double(rig.value) << '\n'
        << "rig1d_condition=" << format_bool(rig.n_condition_met) << '\n'
        << "adap=" << format_double(adap) << '\n'
        << "entropy_integral_r=" << format_double(r) << '\n'
        << "entropy_integral=" << format_double(eib) << '\n';
  return kOk;
}

int cmd_misspec(const Globals& g, const MisspecArgs& a, std::ostream& out, std::ostream& err) {
  const TruthFunction truth = parse_truth(a.truth);
  if (a.n < 3) throw InvalidArgument("misspec: n must be at least 3");
  const DesignGrid grid = make_grid(parse_grid_kind(a.grid), a.n, g.seed);
  const SampledFunction f0 = truth.sample(grid);
  const ConvexFit fit = convex_projection(f0);
  const SampledFunction projection(grid, fit.theta);

  bool pythagorean_ok = true;
  for (std::size_t t = 0; t < a.trials; ++t) {
    const SampledFunction phi = random_convex_function(grid, derive_seed(g.seed, {0x70797468ULL, t}));
    pythagorean_ok = pythagorean_gap(f0, projection, phi) >= -a.tol && pythagorean_ok;
  }
  std::string affine_ok = "na";
  if (truth.is_concave()) affine_ok = format_bool(concave_projection_affine_check(f0, a.affine_tol));

  {
    Sink sink(g.out, out);
    *sink << "x,f0,projection\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      *sink << format_double(grid[i]) << ',' << format_double(f0[i]) << ',' << format_double(fit.theta[i]) << '\n';
  }
  Sink summary(summary_path(a.summary, g.out), err);
  *summary << "pythagorean_ok,affine_ok\n" << format_bool(pythagorean_ok) << ',' << affine_ok << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least squares convex regression toolkit"};
  app.name("convexreg");
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--config", g.config, "File of 'key = value' lines; command-line flags take precedence");
  app.add_option("--out", g.out, "Primary output file (default: standard output)");
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the convex LSE to an x,y CSV file");
  fit_cmd->add_option("--input", fit.input, "CSV with header x,y, sorted by x, x in [0,1]")->required();
  fit_cmd->add_option("--tol", fit.tol, "KKT tolerance (relative to max(1, |y|_inf))")->capture_default_str();

  RiskArgs risk;
  auto* risk_cmd = app.add_subcommand("risk", "Monte Carlo risk curve and rate exponent");
  risk_cmd->add_option("--truth", risk.truth, "Truth id, affine:slope,intercept or poly:c0,c1,...")->capture_default_str();
  risk_cmd->add_option("--sigma", risk.sigma, "Noise standard deviation")->capture_default_str();
  risk_cmd->add_option("--n", risk.n, "Sample sizes (comma separated, ascending)")->delimiter(',')->capture_default_str();
  risk_cmd->add_option("--reps", risk.reps, "Replications per n")->capture_default_str();
  risk_cmd->add_option("--grid", risk.grid, "uniform|jittered")->capture_default_str();
  risk_cmd->add_option("--summary", risk.summary, "Rate summary file (default: derived from --out, else stderr)");

  PackingArgs packing;
  auto* packing_cmd = app.add_subcommand("packing", "Varshamov-Gilbert packing sets and entropy slope");
  packing_cmd->add_option("--truth", packing.truth, "Convex truth id")->capture_default_str();
  packing_cmd->add_option("--m", packing.m, "Bump counts (comma separated)")->delimiter(',')->capture_default_str();
  packing_cmd->add_option("--n", packing.n, "Grid size")->capture_default_str();
  packing_cmd->add_option("--a", packing.a, "Left end of the curvature interval")->capture_default_str();
  packing_cmd->add_option("--b", packing.b, "Right end of the curvature interval")->capture_default_str();
  packing_cmd->add_option("--kappa1", packing.kappa1, "Lower curvature bound (default: from the truth)");
  packing_cmd->add_option("--kappa2", packing.kappa2, "Upper curvature bound (default: from the truth)");
  packing_cmd->add_option("--grid", packing.grid, "uniform|jittered")->capture_default_str();
  packing_cmd->add_option("--summary", packing.summary, "Slope summary file (default: derived from --out, else stderr)");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate lower bound, radius and risk envelopes");
  bounds_cmd->add_option("--kappa1", bounds.kappa1)->capture_default_str();
  bounds_cmd->add_option("--kappa2", bounds.kappa2)->capture_default_str();
  bounds_cmd->add_option("--a", bounds.a)->capture_default_str();
  bounds_cmd->add_option("--b", bounds.b)->capture_default_str();
  bounds_cmd->add_option("--c1", bounds.c1)->capture_default_str();
  bounds_cmd->add_option("--c2", bounds.c2)->capture_default_str();
  bounds_cmd->add_option("--sigma", bounds.sigma)->capture_default_str();
  bounds_cmd->add_option("--n", bounds.n)->capture_default_str();
  bounds_cmd->add_option("--truth", bounds.truth, "Convex truth for the envelopes")->capture_default_str();
  bounds_cmd->add_option("--C", bounds.constant, "Constant in the envelopes")->capture_default_str();
  bounds_cmd->add_option("--max-k", bounds.max_k, "Largest candidate piece count")->capture_default_str();
  bounds_cmd->add_option("--r", bounds.r, "Radius for the entropy integral (default: neighborhood radius)");

  MisspecArgs misspec;
  auto* misspec_cmd = app.add_subcommand("misspec", "Convex projection of a possibly nonconvex truth");
  misspec_cmd->add_option("--truth", misspec.truth)->capture_default_str();
  misspec_cmd->add_option("--n", misspec.n)->capture_default_str();
  misspec_cmd->add_option("--grid", misspec.grid, "uniform|jittered")->capture_default_str();
  misspec_cmd->add_option("--trials", misspec.trials, "Random convex functions for the Pythagorean check")
      ->capture_default_str();
  misspec_cmd->add_option("--tol", misspec.tol, "Pythagorean slack")->capture_default_str();
  misspec_cmd->add_option("--affine-tol", misspec.affine_tol, "Collinearity tolerance")->capture_default_str();
  misspec_cmd->add_option("--summary", misspec.summary, "Flag summary file (default: derived from --out, else stderr)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> argv = args;
  try {
    // Config entries become flags unless the same flag was given directly.
    const auto cfg_flag = std::find_if(argv.begin(), argv.end(), [](const std::string& s) {
      return s == "--config" || s.rfind("--config=", 0) == 0;
    });
    if (cfg_flag != argv.end()) {
      std::string path;
      if (*cfg_flag == "--config") {
        if (cfg_flag + 1 == argv.end()) throw InvalidArgument("--config needs a path");
        path = *(cfg_flag + 1);
      } else {
        path = cfg_flag->substr(9);
      }
      const auto command = std::find_if(argv.begin(), argv.end(), [&](const std::string& s) {
        return !app.get_subcommands([&](CLI::App* c) { return c->get_name() == s; }).empty();
      });
      CLI::App* sub = command == argv.end() ? nullptr : app.get_subcommand(*command);
      std::vector<std::string> extra;
      for (const auto& [key, value] : load_config(path)) {
        const std::string flag = "--" + key;
        const bool known = key != "config" && (app.get_option_no_throw(flag) != nullptr ||
                                               (sub != nullptr && sub->get_option_no_throw(flag) != nullptr));
        if (!known) throw InvalidArgument(path + ": unknown key '" + key + "'");
        if (given_on_command_line(args, key)) continue;
        extra.push_back(flag);
        extra.push_back(value);
      }
      argv.insert(argv.end(), extra.begin(), extra.end());
    }

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsage;
    }

    if (*fit_cmd) return cmd_fit(g, fit, out, err);
    if (*risk_cmd) return cmd_risk(g, risk, out, err);
    if (*packing_cmd) return cmd_packing(g, packing, out, err);
    if (*bounds_cmd) return cmd_bounds(g, bounds, out);
    if (*misspec_cmd) return cmd_misspec(g, misspec, out, err);
    return kUsage;
  } catch (const PreconditionViolation& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace convexreg::cli
