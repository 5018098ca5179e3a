// Command-line harness: canned experiments (simulate/compare), user-data
// fitting and prediction, and checkpoint evaluation.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 divergence.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fsgd/checkpoint.hpp"
#include "fsgd/errors.hpp"
#include "fsgd/presets.hpp"
#include "fsgd/simlab.hpp"

namespace {

using namespace fsgd;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) parts.push_back(token);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

double parse_number(const std::string& token, long row) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("row " + std::to_string(row) + ": bad number '" + token + "'", row);
  }
  return v;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  return out;
}

// ---------------------------------------------------------------------------
// Option bags, one instance per subcommand. The cached option pointers tell
// explicitly-set flags apart from defaults when merging with presets.

struct ScenarioOptions {
  std::string preset;
  int p = 1;
  std::string dgp = "uniform";
  double lo = 0.0, hi = 1.0;
  std::string target = "univariate";
  double noise = 0.0;
  long n = 100000;
  int reps = 20;
  std::uint64_t seed = 1;

  CLI::Option* preset_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* dgp_opt = nullptr;
  CLI::Option* lo_opt = nullptr;
  CLI::Option* hi_opt = nullptr;
  CLI::Option* target_opt = nullptr;
  CLI::Option* noise_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* reps_opt = nullptr;

  void attach(CLI::App& cmd) {
    preset_opt = cmd.add_option("--scenario", preset,
                                "Named scenario preset (fig1a-p5, fig2, fig3a, fig3b, fig4a, fig4b)");
    p_opt = cmd.add_option("--p", p, "Number of covariates");
    dgp_opt = cmd.add_option("--dgp", dgp, "Covariate law: uniform|ma|interval");
    lo_opt = cmd.add_option("--lo", lo, "Interval lower bound");
    hi_opt = cmd.add_option("--hi", hi, "Interval upper bound");
    target_opt = cmd.add_option("--target", target, "Ground truth: additive|univariate");
    noise_opt = cmd.add_option("--noise", noise, "Noise halfwidth w (uniform on [-w,w])");
    n_opt = cmd.add_option("--n", n, "Stream length");
    reps_opt = cmd.add_option("--reps", reps, "Replication count");
    cmd.add_option("--seed", seed, "Base RNG seed")->envname("FSGD_SEED");
  }

  Scenario build(std::optional<Preset>& preset_out) const {
    Scenario scenario;
    if (!preset.empty()) {
      auto found = find_preset(preset);
      if (!found) throw ConfigError("unknown scenario preset: " + preset);
      scenario = found->scenario;
      preset_out = std::move(found);
    }
    if (p_opt->count()) scenario.p = p;
    if (dgp_opt->count()) {
      if (dgp == "uniform") scenario.dgp = Dgp::UniformCube;
      else if (dgp == "ma") scenario.dgp = Dgp::MovingAverage;
      else if (dgp == "interval") scenario.dgp = Dgp::UniformInterval;
      else throw ConfigError("unknown dgp: " + dgp);
    }
    if (lo_opt->count()) scenario.lo = lo;
    if (hi_opt->count()) scenario.hi = hi;
    if (target_opt->count()) {
      if (target == "additive") scenario.target = TargetFn::Bernoulli4Additive;
      else if (target == "univariate") scenario.target = TargetFn::Bernoulli4Univariate;
      else throw ConfigError("unknown target: " + target);
    }
    if (noise_opt->count()) scenario.noise_halfwidth = noise;
    if (n_opt->count()) scenario.n = n;
    if (reps_opt->count()) scenario.reps = reps;
    scenario.seed = seed;
    try {
      validate(scenario);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    return scenario;
  }
};

struct EstimatorOptions {
  std::string estimator;
  std::string schedule;
  double A = 1.0, A1 = 1.0, A2 = 5.0, B = 0.5, s = 2.0;
  double gamma = 0.0;
  long J = 0;
  double s0 = 0.5, s1 = 8.0;
  double omega = 2.0;
  std::string intercept = "auto";
  std::string basis = "trig";

  CLI::Option* estimator_opt = nullptr;
  CLI::Option* schedule_opt = nullptr;
  CLI::Option* A_opt = nullptr;
  CLI::Option* A1_opt = nullptr;
  CLI::Option* A2_opt = nullptr;
  CLI::Option* B_opt = nullptr;
  CLI::Option* s_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* J_opt = nullptr;
  CLI::Option* s0_opt = nullptr;
  CLI::Option* s1_opt = nullptr;

  void attach(CLI::App& cmd) {
    estimator_opt = cmd.add_option("--estimator", estimator, "fsgd|sieve|lepski");
    schedule_opt = cmd.add_option("--schedule", schedule,
                                  "fixed|three-stage|poly|constant|lepski");
    A_opt = cmd.add_option("--A", A, "Rate constant (fixed/poly/lepski)");
    A1_opt = cmd.add_option("--A1", A1, "Three-stage second-stage rate constant");
    A2_opt = cmd.add_option("--A2", A2, "Three-stage third-stage rate constant");
    B_opt = cmd.add_option("--B", B, "Truncation constant");
    s_opt = cmd.add_option("--s", s, "Smoothness parameter");
    gamma_opt = cmd.add_option("--gamma", gamma, "Constant schedule step size");
    J_opt = cmd.add_option("--J", J, "Constant schedule truncation");
    s0_opt = cmd.add_option("--s0", s0, "Adaptive grid lower end");
    s1_opt = cmd.add_option("--s1", s1, "Adaptive grid upper end");
    cmd.add_option("--omega", omega, "Sieve weight exponent (t_j = j^-2w)");
    cmd.add_option("--intercept", intercept, "auto|on|off");
    cmd.add_option("--basis", basis, "Basis family (trig)")
        ->check(CLI::IsMember({"trig"}));
  }

  bool any_schedule_flag() const {
    return schedule_opt->count() || A_opt->count() || A1_opt->count() || A2_opt->count() ||
           B_opt->count() || s_opt->count() || gamma_opt->count() || J_opt->count();
  }

  Schedule build_schedule(const std::string& kind, int scenario_p) const {
    try {
      if (kind == "fixed") return Schedule::fixed_p(A, B, s, scenario_p);
      if (kind == "three-stage") return Schedule::three_stage(scenario_p, A1, A2, B, s);
      if (kind == "poly") return Schedule::polynomial(A, s);
      if (kind == "constant") return Schedule::constant(gamma, J);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("unknown schedule: " + kind);
  }

  // Preset schedules are parameterized by the preset's dimension; keep them
  // aligned when --p overrides the scenario.
  static void align_schedule_p(EstimatorConfig& config, const Scenario& scenario) {
    const Schedule& sched = config.schedule;
    if (sched.p() == scenario.p) return;
    if (sched.kind() == ScheduleKind::ThreeStage) {
      config.schedule =
          Schedule::three_stage(scenario.p, sched.A1(), sched.A2(), sched.B(), sched.s());
    } else if (sched.kind() == ScheduleKind::FixedP) {
      config.schedule = Schedule::fixed_p(sched.A(), sched.B(), sched.s(), scenario.p);
    }
  }

  EstimatorConfig build(const std::optional<Preset>& preset, const Scenario& scenario) const {
    EstimatorConfig config;
    if (preset) {
      config = preset->estimator;
      align_schedule_p(config, scenario);
    }

    std::string kind_name = estimator;
    if (!estimator_opt->count()) {
      if (schedule_opt->count() && schedule == "lepski") {
        kind_name = "lepski";
      } else if (preset) {
        kind_name = preset->estimator.kind == EstimatorKind::Lepski ? "lepski" : "fsgd";
      } else {
        kind_name = "fsgd";
      }
    }

    if (kind_name == "fsgd") config.kind = EstimatorKind::Fsgd;
    else if (kind_name == "sieve") config.kind = EstimatorKind::Sieve;
    else if (kind_name == "lepski") config.kind = EstimatorKind::Lepski;
    else throw ConfigError("unknown estimator: " + kind_name);

    if (schedule_opt->count()) {
      const bool wants_lepski = schedule == "lepski";
      if (wants_lepski != (config.kind == EstimatorKind::Lepski)) {
        throw ConfigError("--schedule " + schedule + " conflicts with --estimator " + kind_name);
      }
    }

    if (config.kind == EstimatorKind::Lepski) {
      if (s0_opt->count()) config.lepski.s0 = s0;
      if (s1_opt->count()) config.lepski.s1 = s1;
      if (A_opt->count()) config.lepski.A = A;
      if (B_opt->count()) config.lepski.B = B;
      if (!(config.lepski.s0 > 0.0) || !(config.lepski.s1 > config.lepski.s0)) {
        throw ConfigError("adaptive grid requires 0 < s0 < s1");
      }
    } else if (schedule_opt->count()) {
      config.schedule = build_schedule(schedule, scenario.p);
    } else if (any_schedule_flag()) {
      // Parameter flags without --schedule refine the preset kind if any,
      // otherwise the fixed rule.
      const std::string kind =
          preset && preset->estimator.schedule.kind() == ScheduleKind::ThreeStage
              ? "three-stage"
              : "fixed";
      config.schedule = build_schedule(kind, scenario.p);
    } else if (!preset && config.kind == EstimatorKind::Sieve) {
      config = sieve_defaults(scenario);
    } else if (!preset) {
      config.schedule = build_schedule("fixed", scenario.p);
    } else if (config.kind == EstimatorKind::Sieve) {
      config.schedule = sieve_defaults(scenario).schedule;
    }

    config.sieve_omega = omega;
    if (intercept == "on") config.include_intercept = true;
    else if (intercept == "off") config.include_intercept = false;
    else if (intercept != "auto") throw ConfigError("unknown intercept mode: " + intercept);
    return config;
  }
};

struct RunOptions {
  std::string out = "results.csv";
  std::string summary;
  std::string eval_points;
  int per_decade = 8;
  std::string fit_window;
  long mc_points = 100000;
  int threads = 1;
  double target_slope = -0.8;
  std::string chosen_s_out;
  double C1 = 1.0, C2 = 1.0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--out", out, "Results file (rep,n,mse rows)");
    cmd.add_option("--summary", summary, "Summary file (n,mse_mean,mse_stderr + slope trailer)");
    cmd.add_option("--eval-points", eval_points, "Comma-separated step counts to evaluate at");
    cmd.add_option("--per-decade", per_decade, "Eval grid density when --eval-points is unset");
    cmd.add_option("--fit-window", fit_window, "Slope fit window 'lo,hi' (default last decade)");
    cmd.add_option("--mc-points", mc_points, "Monte Carlo draws per evaluation");
    cmd.add_option("--threads", threads, "Replication worker threads");
    cmd.add_option("--target-slope", target_slope, "Reference slope in the summary trailer");
    cmd.add_option("--log-s", chosen_s_out, "File for per-step chosen smoothness (lepski)");
    cmd.add_option("--C1", C1, "Assumed density lower bound for hypothesis warnings");
    cmd.add_option("--C2", C2, "Assumed density upper bound for hypothesis warnings");
  }

  ExperimentOptions build(const Scenario& scenario) const {
    ExperimentOptions options;
    if (!eval_points.empty()) {
      for (const auto& token : split(eval_points, ',')) {
        char* end = nullptr;
        const long value = std::strtol(token.c_str(), &end, 10);
        if (end == token.c_str() || *end != '\0' || value < 1 || value > scenario.n) {
          throw ConfigError("--eval-points entries must be integers in [1, n]; got '" +
                            token + "'");
        }
        options.eval_points.push_back(value);
      }
      if (!std::is_sorted(options.eval_points.begin(), options.eval_points.end())) {
        throw ConfigError("--eval-points must be sorted ascending");
      }
    } else {
      options.eval_points = default_eval_grid(scenario.n, per_decade);
    }
    if (!fit_window.empty()) {
      const auto parts = split(fit_window, ',');
      if (parts.size() != 2) throw ConfigError("--fit-window expects 'lo,hi'");
      options.fit_window_lo = std::strtod(parts[0].c_str(), nullptr);
      options.fit_window_hi = std::strtod(parts[1].c_str(), nullptr);
    }
    options.mc_points = mc_points;
    options.threads = threads;
    options.target_slope = target_slope;
    options.record_chosen_s = !chosen_s_out.empty();
    return options;
  }
};

void emit_schedule_warnings(const EstimatorConfig& config, const Scenario& scenario,
                            double C1, double C2) {
  if (config.kind == EstimatorKind::Lepski) return;
  const auto warnings = validate_schedule(config.schedule, C1, C2,
                                          BasisFamily::trigonometric().bound(), scenario.n);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_results(std::ostream& out, const EvalReport& report,
                   const std::vector<long>& eval_points, const std::string& tag) {
  for (std::size_t rep = 0; rep < report.per_rep.size(); ++rep) {
    for (std::size_t t = 0; t < eval_points.size(); ++t) {
      if (!tag.empty()) out << tag << ',';
      out << rep << ',' << eval_points[t] << ',' << format_value(report.per_rep[rep][t])
          << '\n';
    }
  }
}

void write_summary(std::ostream& out, const EvalReport& report, const std::string& tag) {
  for (const auto& row : report.rows) {
    if (!tag.empty()) out << tag << ',';
    out << row.n << ',' << format_value(row.mse_mean) << ','
        << format_value(row.mse_std_error) << '\n';
  }
  if (!tag.empty()) out << tag << ',';
  out << "slope=" << format_value(report.slope) << ",target="
      << format_value(report.target_slope) << '\n';
}

void write_chosen_s(const std::string& path, const EvalReport& report) {
  auto out = open_output(path);
  out << "rep,i,s\n";
  for (std::size_t rep = 0; rep < report.chosen_s.size(); ++rep) {
    for (std::size_t i = 0; i < report.chosen_s[rep].size(); ++i) {
      out << rep << ',' << (i + 1) << ',' << format_value(report.chosen_s[rep][i]) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Data files: header x1,...,xp[,y] then one CSV row per observation.

struct DataFile {
  int p = 0;
  bool has_response = false;
  std::vector<Sample> rows;
};

DataFile read_data_file(const std::string& path, bool require_response) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty data file: " + path);
  auto columns = split(header, ',');
  DataFile data;
  data.has_response = !columns.empty() && columns.back() == "y";
  const int x_columns = static_cast<int>(columns.size()) - (data.has_response ? 1 : 0);
  if (x_columns < 1) throw ParseError("data header needs columns x1,...,xp", 1);
  for (int k = 0; k < x_columns; ++k) {
    if (columns[static_cast<std::size_t>(k)] != "x" + std::to_string(k + 1)) {
      throw ParseError("data header must name covariates x1,...,xp", 1);
    }
  }
  if (require_response && !data.has_response) {
    throw ParseError("data header must end with a y column", 1);
  }
  data.p = x_columns;

  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto tokens = split(line, ',');
    if (tokens.size() != columns.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                           std::to_string(columns.size()) + " columns, got " +
                           std::to_string(tokens.size()),
                       row);
    }
    Sample sample;
    sample.x.reserve(static_cast<std::size_t>(data.p));
    for (int k = 0; k < data.p; ++k) {
      const double v = parse_number(tokens[static_cast<std::size_t>(k)], row);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParseError("row " + std::to_string(row) + ": x" + std::to_string(k + 1) +
                             " = " + tokens[static_cast<std::size_t>(k)] +
                             " outside [0,1]",
                         row);
      }
      sample.x.push_back(v);
    }
    if (data.has_response) {
      sample.y = parse_number(tokens.back(), row);
      if (!std::isfinite(sample.y)) {
        throw ParseError("row " + std::to_string(row) + ": non-finite response", row);
      }
    }
    data.rows.push_back(std::move(sample));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_simulate(const Scenario& scenario, const EstimatorConfig& config,
                 const RunOptions& run) {
  emit_schedule_warnings(config, scenario, run.C1, run.C2);
  const auto options = run.build(scenario);
  const auto report = run_experiment(scenario, config, options);

  auto out = open_output(run.out);
  out << "rep,n,mse\n";
  write_results(out, report, options.eval_points, "");

  if (!run.summary.empty()) {
    auto summary = open_output(run.summary);
    summary << "n,mse_mean,mse_stderr\n";
    write_summary(summary, report, "");
  }
  if (!run.chosen_s_out.empty() && !report.chosen_s.empty()) {
    write_chosen_s(run.chosen_s_out, report);
  }
  std::cout << "slope=" << format_value(report.slope) << ",target="
            << format_value(report.target_slope) << "\n";
  return kExitOk;
}

int cmd_compare(const Scenario& scenario, const std::vector<std::string>& names,
                const std::optional<Preset>& preset, const EstimatorOptions& estimators,
                const RunOptions& run) {
  const auto options = run.build(scenario);

  auto out = open_output(run.out);
  out << "estimator,rep,n,mse\n";
  std::ostringstream summary;
  summary << "estimator,n,mse_mean,mse_stderr\n";

  for (const auto& name : names) {
    EstimatorConfig config;
    if (name == "fsgd") {
      if (preset && preset->estimator.kind == EstimatorKind::Fsgd) {
        config = preset->estimator;
        EstimatorOptions::align_schedule_p(config, scenario);
      } else if (estimators.any_schedule_flag()) {
        config = estimators.build(std::nullopt, scenario);
        config.kind = EstimatorKind::Fsgd;
      } else {
        throw ConfigError("compare: no schedule available for fsgd");
      }
    } else if (name == "sieve") {
      config = sieve_defaults(scenario);
      if (estimators.any_schedule_flag() && !preset) {
        const auto flags = estimators.build(std::nullopt, scenario);
        config.schedule = flags.schedule;
      }
      config.sieve_omega = estimators.omega;
    } else if (name == "lepski") {
      if (preset && preset->estimator.kind == EstimatorKind::Lepski) {
        config = preset->estimator;
      } else {
        config.kind = EstimatorKind::Lepski;
        config.lepski = {estimators.s0, estimators.s1, estimators.A, estimators.B};
      }
    } else {
      throw ConfigError("unknown estimator in --estimators: " + name);
    }
    if (config.kind != EstimatorKind::Lepski) {
      emit_schedule_warnings(config, scenario, run.C1, run.C2);
    }
    const auto report = run_experiment(scenario, config, options);
    write_results(out, report, options.eval_points, name);
    write_summary(summary, report, name);
  }

  if (!run.summary.empty()) {
    auto file = open_output(run.summary);
    file << summary.str();
  }
  return kExitOk;
}

int cmd_fit(const std::string& data_path, const std::string& checkpoint_path,
            const EstimatorOptions& estimators, const RunOptions& run,
            std::uint64_t /*seed*/) {
  if (estimators.estimator_opt->count() && estimators.estimator != "fsgd") {
    throw ConfigError("fit streams through the plain estimator; --estimator must be fsgd");
  }
  const auto data = read_data_file(data_path, /*require_response=*/true);

  Scenario shape;  // only p participates in schedule construction
  shape.p = data.p == 0 ? 1 : data.p;
  const std::string schedule_kind =
      estimators.schedule_opt->count() ? estimators.schedule : "fixed";
  if (schedule_kind == "lepski") {
    throw ConfigError("fit does not support the adaptive schedule");
  }
  const Schedule schedule = estimators.build_schedule(schedule_kind, shape.p);
  const bool intercept = estimators.intercept != "off";

  ModelState state(BasisFamily::from_name(estimators.basis), shape.p, intercept);
  {
    const auto warnings =
        validate_schedule(schedule, run.C1, run.C2, state.basis().bound(),
                          static_cast<long>(data.rows.size()));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  }

  VectorStream stream(data.rows);
  fit_stream(state, stream, schedule, LossGradient::squared());
  save_checkpoint_file(state, checkpoint_path);
  std::cout << "fit " << state.steps() << " rows into " << checkpoint_path << "\n";
  return kExitOk;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& data_path,
                const std::string& out_path) {
  const ModelState state = load_checkpoint_file(checkpoint_path);
  const auto data = read_data_file(data_path, /*require_response=*/false);
  if (data.p != state.dim()) {
    throw ParseError("data has " + std::to_string(data.p) + " covariates, checkpoint expects " +
                     std::to_string(state.dim()));
  }
  auto out = open_output(out_path);
  for (const auto& sample : data.rows) {
    out << format_value(state.predict(sample.x)) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const Scenario& scenario,
             const std::string& method, long mc_points) {
  const ModelState state = load_checkpoint_file(checkpoint_path);
  if (state.dim() != scenario.p) {
    throw ParseError("checkpoint dimension " + std::to_string(state.dim()) +
                     " does not match scenario p = " + std::to_string(scenario.p));
  }
  const bool quadrature =
      method == "quad" || (method == "auto" && scenario.dgp == Dgp::UniformCube);
  if (quadrature) {
    const long tail_cut = std::max(512L, state.truncation());
    const auto truth = project_truth(scenario, state.basis(), tail_cut);
    std::cout << "mse=" << format_value(mse_quadrature(state, scenario, truth)) << "\n";
  } else {
    Philox rng(scenario.seed, 0, 1);
    const auto mse = mse_monte_carlo(state, scenario, mc_points, rng);
    std::cout << "mse=" << format_value(mse.value) << ",stderr="
              << format_value(mse.std_error) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming additive nonparametric regression harness"};
  app.require_subcommand(1);
  // Flag-default files: `fsgd --config file <subcommand> ...` with values in
  // a [subcommand] section. Command-line flags beat config values, which
  // beat preset defaults.
  app.set_config("--config");

  auto* simulate = app.add_subcommand("simulate", "Run a canned or custom experiment");
  simulate->configurable();
  ScenarioOptions sim_scenario;
  EstimatorOptions sim_estimator;
  RunOptions sim_run;
  sim_scenario.attach(*simulate);
  sim_estimator.attach(*simulate);
  sim_run.attach(*simulate);

  auto* compare = app.add_subcommand("compare", "Run several estimators on one scenario");
  compare->configurable();
  ScenarioOptions cmp_scenario;
  EstimatorOptions cmp_estimator;
  RunOptions cmp_run;
  std::string estimators_list = "fsgd,sieve";
  cmp_scenario.attach(*compare);
  cmp_estimator.attach(*compare);
  cmp_run.attach(*compare);
  compare->add_option("--estimators", estimators_list, "Comma-separated estimator list");

  auto* fit = app.add_subcommand("fit", "Stream a CSV data file into a checkpoint");
  fit->configurable();
  EstimatorOptions fit_estimator;
  RunOptions fit_run;
  std::string data_path;
  std::string ckpt_out = "model.ckpt";
  fit->add_option("--data", data_path, "Input CSV (header x1,...,xp,y)")->required();
  fit->add_option("--ckpt-out", ckpt_out, "Checkpoint output path");
  fit_estimator.attach(*fit);
  fit->add_option("--C1", fit_run.C1, "Assumed density lower bound for warnings");
  fit->add_option("--C2", fit_run.C2, "Assumed density upper bound for warnings");
  std::uint64_t fit_seed = 1;
  fit->add_option("--seed", fit_seed)->envname("FSGD_SEED");

  auto* predict = app.add_subcommand("predict", "Predict rows with a checkpoint");
  std::string ckpt_in;
  std::string predict_data;
  std::string predict_out = "predictions.txt";
  predict->add_option("--ckpt", ckpt_in, "Checkpoint path")->required();
  predict->add_option("--data", predict_data, "Covariate CSV (header x1,...,xp)")->required();
  predict->add_option("--out", predict_out, "Predictions output path");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint against a scenario");
  ScenarioOptions eval_scenario;
  std::string eval_ckpt;
  std::string eval_method = "auto";
  long eval_mc_points = 100000;
  eval->add_option("--ckpt", eval_ckpt, "Checkpoint path")->required();
  eval_scenario.attach(*eval);
  eval->add_option("--method", eval_method, "auto|quad|mc")
      ->check(CLI::IsMember({"auto", "quad", "mc"}));
  eval->add_option("--mc-points", eval_mc_points, "Monte Carlo draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fit) {
      return cmd_fit(data_path, ckpt_out, fit_estimator, fit_run, fit_seed);
    }
    if (*predict) {
      return cmd_predict(ckpt_in, predict_data, predict_out);
    }
    if (*eval) {
      std::optional<Preset> preset;
      const Scenario scenario = eval_scenario.build(preset);
      return cmd_eval(eval_ckpt, scenario, eval_method, eval_mc_points);
    }
    if (*compare) {
      std::optional<Preset> preset;
      const Scenario scenario = cmp_scenario.build(preset);
      auto names = split(estimators_list, ',');
      if (names.empty()) throw ConfigError("--estimators must name at least one estimator");
      return cmd_compare(scenario, names, preset, cmp_estimator, cmp_run);
    }
    std::optional<Preset> preset;
    const Scenario scenario = sim_scenario.build(preset);
    const EstimatorConfig config = sim_estimator.build(preset, scenario);
    return cmd_simulate(scenario, config, sim_run);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
