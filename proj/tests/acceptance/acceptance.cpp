// Acceptance suite for the streaming estimator: reproduces the reference
// convergence experiments at desk scale and checks the library's core
// numerical contracts. Run all criteria or a single one:
//
//   fsgd_acceptance [--criterion N] [--seed S]
//
// Each criterion prints one PASS/FAIL line; the exit code is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fsgd/checkpoint.hpp"
#include "fsgd/errors.hpp"
#include "fsgd/lepski.hpp"
#include "fsgd/model.hpp"
#include "fsgd/presets.hpp"
#include "fsgd/rng.hpp"
#include "fsgd/sieve.hpp"
#include "fsgd/simlab.hpp"

using namespace fsgd;

namespace {

std::uint64_t g_seed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool within(double value, double center, double tolerance) {
  return std::fabs(value - center) <= tolerance;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Criterion 1: univariate minimax rate. f = B4, X ~ U[0,1], noise 0.02,
// gamma = 3/i, J = floor(i^0.2), n = 1e5; slope over [1e3, 1e5] within
// 0.15 of -0.8. 100 repetitions (the reference figure's own count).
Outcome criterion1() {
  auto preset = *find_preset("fig3a");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 100;
  ExperimentOptions options;
  options.fit_window_lo = 1e3;
  options.fit_window_hi = 1e5;
  const auto report = run_experiment(preset.scenario, preset.estimator, options);
  Outcome out;
  out.pass = within(report.slope, -0.8, 0.15);
  out.detail = "slope " + fmt(report.slope) + " vs -0.8 +/- 0.15 over [1e3,1e5], 100 reps";
  return out;
}

// Criterion 2: partial support. X ~ U[0.25,0.75], noise 0.2, J = floor(0.8
// i^0.2); last-decade slope within 0.2 of -0.8.
Outcome criterion2() {
  auto preset = *find_preset("fig3b");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 20;
  const auto report = run_experiment(preset.scenario, preset.estimator, {});
  Outcome out;
  out.pass = within(report.slope, -0.8, 0.2);
  out.detail = "slope " + fmt(report.slope) + " vs -0.8 +/- 0.2 over the last decade";
  return out;
}

// Criterion 3: additive fixed-p rate, p = 5, A = 1, B = 0.5, s = 2;
// last-decade slope within 0.2 of -0.8.
Outcome criterion3() {
  auto preset = *find_preset("fig1a-p5");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 20;
  const auto report = run_experiment(preset.scenario, preset.estimator, {});
  Outcome out;
  out.pass = within(report.slope, -0.8, 0.2);
  out.detail = "slope " + fmt(report.slope) + " vs -0.8 +/- 0.2 over the last decade";
  return out;
}

// Criterion 4: three-stage behavior at p = 30 (plateau + final-decade
// slope) and the scaled p-sweep at n = 1e5.
Outcome criterion4() {
  std::ostringstream detail;
  bool pass = true;

  auto preset = *find_preset("fig2");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 20;
  ExperimentOptions options;
  options.eval_points = {10, 30, 60, 100, 316, 1000, 3162, 10000, 17783, 31623, 56234, 100000};
  const auto report = run_experiment(preset.scenario, preset.estimator, options);

  // (i) Exact plateau at ||f||^2 while gamma = J = 0 (i <= p/B = 60): every
  // replication holds the identical value, which matches the squared norm.
  const auto truth = project_truth(preset.scenario, BasisFamily::trigonometric());
  bool plateau = true;
  const double reference = report.per_rep[0][0];
  for (std::size_t t = 0; t < options.eval_points.size() && options.eval_points[t] <= 60; ++t) {
    for (const auto& rep : report.per_rep) plateau = plateau && rep[t] == reference;
  }
  plateau = plateau && std::fabs(reference - truth.norm_sq) <= 1e-10 * truth.norm_sq;
  pass = pass && plateau;
  detail << "plateau==||f||^2 for i<=60: " << (plateau ? "yes" : "NO");

  // (ii) Final-decade slope within 0.2 of -0.8.
  const bool slope_ok = within(report.slope, -0.8, 0.2);
  pass = pass && slope_ok;
  detail << "; slope " << fmt(report.slope) << " vs -0.8 +/- 0.2";

  // (iii) MSE at n = 1e5 for p in {8,16,32} fits a log-log slope in p
  // within 0.3 of 1.
  std::vector<EvalRow> sweep;
  for (const int p : {8, 16, 32}) {
    Scenario scenario = preset.scenario;
    scenario.p = p;
    EstimatorConfig config;
    config.kind = EstimatorKind::Fsgd;
    config.schedule = Schedule::three_stage(p, 1.0, 5.0, 0.5, 2.0);
    ExperimentOptions sweep_options;
    sweep_options.eval_points = {100000};
    const auto r = run_experiment(scenario, config, sweep_options);
    sweep.push_back({p, r.rows[0].mse_mean, r.rows[0].mse_std_error});
  }
  const double p_slope = fit_loglog_slope(sweep, 1.0, 1e9);
  const bool sweep_ok = within(p_slope, 1.0, 0.3);
  pass = pass && sweep_ok;
  detail << "; p-sweep slope " << fmt(p_slope) << " vs 1 +/- 0.3";

  return {pass, detail.str()};
}

// Criterion 5: adaptive smoothness selection on the criterion-1 scenario,
// grid [0.5, 8], A = B = 3; slope within 0.25 of -0.8 over [1e3, 1e5].
// 30 repetitions (the reference figure's own count).
Outcome criterion5() {
  auto preset = *find_preset("fig4a");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 30;
  ExperimentOptions options;
  options.fit_window_lo = 1e3;
  options.fit_window_hi = 1e5;
  const auto report = run_experiment(preset.scenario, preset.estimator, options);
  Outcome out;
  out.pass = within(report.slope, -0.8, 0.25);
  out.detail = "slope " + fmt(report.slope) + " vs -0.8 +/- 0.25 over [1e3,1e5], 30 reps";
  return out;
}

// Criterion 6: sieve baseline parity under the criterion-1 scenario with
// gamma = 3/i, J = floor(i^0.21), t_j = j^-4; final MSEs at n = 1e5 within
// a factor of 3.
Outcome criterion6() {
  auto preset = *find_preset("fig3a");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 20;
  ExperimentOptions options;
  options.eval_points = {100000};

  const auto fsgd_report = run_experiment(preset.scenario, preset.estimator, options);
  const auto sieve_report =
      run_experiment(preset.scenario, sieve_defaults(preset.scenario), options);

  const double a = fsgd_report.rows[0].mse_mean;
  const double b = sieve_report.rows[0].mse_mean;
  const double ratio = std::max(a / b, b / a);
  Outcome out;
  out.pass = ratio <= 3.0;
  out.detail = "final MSE fsgd " + fmt(a) + " vs sieve " + fmt(b) + ", ratio " + fmt(ratio) +
               " (limit 3)";
  return out;
}

// Criterion 7: the library's numerical property contracts.
Outcome criterion7() {
  std::ostringstream detail;
  bool pass = true;
  const auto basis = BasisFamily::trigonometric();
  const auto loss = LossGradient::squared();
  const auto note = [&](const char* name, bool ok) {
    pass = pass && ok;
    detail << name << (ok ? " ok" : " FAILED") << "; ";
  };

  // Basis: centering to 1e-10, orthonormality to 1e-8, bound sqrt(2)+1e-12.
  {
    bool ok = true;
    for (long j = 1; j <= 20 && ok; ++j) {
      ok = std::fabs(integrate_simpson([&](double x) { return basis.eval(j, x); }, 100000)) <=
           1e-10;
    }
    for (long i = 1; i <= 20 && ok; ++i) {
      const auto row =
          project_coeffs([&](double x) { return basis.eval(i, x); }, basis, 20, 10000);
      for (long j = 1; j <= 20 && ok; ++j) {
        ok = std::fabs(row[j - 1] - (i == j ? 1.0 : 0.0)) <= 1e-8;
      }
    }
    std::vector<double> prefix(64);
    for (int t = 0; t <= 10000 && ok; ++t) {
      basis.eval_prefix(t / 10000.0, prefix);
      for (double v : prefix) ok = ok && std::fabs(v) <= std::numbers::sqrt2 + 1e-12;
    }
    note("basis", ok);
  }

  // Update equivalence with the functional recursion to 1e-12 at 100
  // random points over 100 random steps.
  {
    bool ok = true;
    ModelState state(basis, 2, true);
    Philox rng(g_seed, 0, 70);
    std::vector<std::vector<double>> queries(100, std::vector<double>(2));
    for (auto& q : queries) {
      q[0] = rng.uniform01();
      q[1] = rng.uniform01();
    }
    std::vector<double> x(2);
    for (long i = 1; i <= 100 && ok; ++i) {
      x[0] = rng.uniform01();
      x[1] = rng.uniform01();
      const double y = rng.uniform(-1.0, 1.0);
      const long truncation = 1 + (i % 6);
      const double gamma = 0.5 / static_cast<double>(i);
      std::vector<double> before(queries.size());
      for (std::size_t t = 0; t < queries.size(); ++t) before[t] = state.predict(queries[t]);
      const double r = state.step(x, y, gamma, truncation, loss);
      for (std::size_t t = 0; t < queries.size() && ok; ++t) {
        double direction = 1.0;
        for (int k = 0; k < 2; ++k) {
          for (long j = 1; j <= truncation; ++j) {
            direction += basis.eval(j, x[static_cast<std::size_t>(k)]) *
                         basis.eval(j, queries[t][static_cast<std::size_t>(k)]);
          }
        }
        ok = std::fabs(state.predict(queries[t]) - (before[t] + gamma * r * direction)) <=
             1e-12;
      }
    }
    note("update-equivalence", ok);
  }

  // Polyak identity f_n = (sum of iterates)/(n+1) to 1e-10.
  {
    bool ok = true;
    SieveEstimator est(basis, 1, true, 2.0);
    Philox rng(g_seed, 0, 71);
    double alpha_sum = 0.0;
    std::vector<double> sums;
    const long n = 100;
    for (long i = 1; i <= n; ++i) {
      const std::vector<double> x{rng.uniform01()};
      est.step(x, rng.uniform(-1.0, 1.0), 0.5 / static_cast<double>(i), 1 + (i % 4), loss);
      alpha_sum += est.inner().intercept();
      const auto& inner = est.inner().coefficients()[0];
      if (sums.size() < inner.size()) sums.resize(inner.size(), 0.0);
      for (std::size_t j = 0; j < inner.size(); ++j) sums[j] += inner[j];
    }
    ok = std::fabs(est.average().intercept() - alpha_sum / (n + 1)) <= 1e-10;
    for (std::size_t j = 0; j < sums.size() && ok; ++j) {
      ok = std::fabs(est.average().coefficients()[0][j] - sums[j] / (n + 1)) <= 1e-10;
    }
    note("polyak-identity", ok);
  }

  // Monte Carlo vs quadrature agreement within 4 standard errors.
  {
    Scenario scenario;
    scenario.p = 2;
    scenario.target = TargetFn::Bernoulli4Additive;
    const auto truth = project_truth(scenario, basis);
    ModelState state(basis, 2, true);
    Philox data(g_seed, 0, 72);
    std::vector<double> x(2);
    for (long i = 1; i <= 500; ++i) {
      draw_x(scenario, data, x);
      state.step(x, target_value(scenario, x) + data.symmetric(0.05),
                 1.0 / static_cast<double>(i), 3, loss);
    }
    const double exact = mse_quadrature(state, scenario, truth);
    Philox eval(g_seed, 0, 73);
    const auto mc = mse_monte_carlo(state, scenario, 200000, eval);
    note("mc-vs-quadrature", std::fabs(mc.value - exact) <= 4.0 * mc.std_error);
  }

  // Checkpoint round trip, value exact.
  {
    ModelState state(basis, 2, true);
    state.set_intercept(0.1);
    state.set_steps(77);
    state.set_coefficients({{1.0 / 3.0, 5e-324, -0.0}, {std::numbers::pi, 1e308, 2e-17}});
    std::stringstream buffer;
    save_checkpoint(state, buffer);
    const ModelState loaded = load_checkpoint(buffer);
    bool ok = loaded.steps() == state.steps() && loaded.dim() == state.dim();
    for (int k = 0; k < 2 && ok; ++k) {
      for (int j = 0; j < 3 && ok; ++j) {
        const double a = loaded.coefficients()[k][j];
        const double b = state.coefficients()[k][j];
        ok = std::memcmp(&a, &b, sizeof(double)) == 0;
      }
    }
    note("checkpoint-roundtrip", ok);
  }

  // Bit-identical replay under a fixed seed and any thread count.
  {
    Scenario scenario;
    scenario.p = 1;
    scenario.target = TargetFn::Bernoulli4Univariate;
    scenario.noise_halfwidth = 0.02;
    scenario.n = 3000;
    scenario.reps = 8;
    scenario.seed = g_seed;
    EstimatorConfig config;
    config.schedule = Schedule::fixed_p(3.0, 1.0, 2.0);
    ExperimentOptions serial;
    serial.threads = 1;
    ExperimentOptions threaded;
    threaded.threads = 5;
    const auto a = run_experiment(scenario, config, serial);
    const auto b = run_experiment(scenario, config, serial);
    const auto c = run_experiment(scenario, config, threaded);
    note("replay-determinism", a.per_rep == b.per_rep && a.per_rep == c.per_rep);
  }

  return {pass, detail.str()};
}

// Criterion 8: the polynomial-rate schedule (A = 0.1, s = 2) survives 1e5
// steps on the partial-support scenario and at least halves the initial
// squared error.
Outcome criterion8() {
  auto preset = *find_preset("fig3b");
  preset.scenario.seed = g_seed;
  preset.scenario.reps = 5;
  EstimatorConfig config;
  config.kind = EstimatorKind::Fsgd;
  config.schedule = Schedule::polynomial(0.1, 2.0);
  ExperimentOptions options;
  options.eval_points = {100000};

  Outcome out;
  double final_mse = 0.0;
  try {
    const auto report = run_experiment(preset.scenario, config, options);
    final_mse = report.rows[0].mse_mean;
  } catch (const DivergenceError& e) {
    out.pass = false;
    out.detail = std::string("diverged: ") + e.what();
    return out;
  }

  // ||f||^2 under the interval law via Monte Carlo (the zero state's error).
  Philox rng(g_seed, 0, 80);
  const auto initial = mse_monte_carlo(
      [](std::span<const double>) { return 0.0; },
      [&preset](std::span<const double> x) { return target_value(preset.scenario, x); },
      preset.scenario, 400000, rng);

  out.pass = final_mse < 0.5 * initial.value;
  out.detail = "final MSE " + fmt(final_mse) + " vs 0.5*||f||^2 = " +
               fmt(0.5 * initial.value) + " after 1e5 steps (A=0.1)";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      g_seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N] [--seed S]\n", argv[0]);
      return 64;
    }
  }

  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "univariate minimax rate", criterion1},
      {2, "partial-support robustness", criterion2},
      {3, "additive fixed-p rate", criterion3},
      {4, "three-stage behavior", criterion4},
      {5, "adaptive smoothness rate", criterion5},
      {6, "sieve baseline parity", criterion6},
      {7, "property suites", criterion7},
      {8, "polynomial-rate smoke test", criterion8},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    if (only != 0 && entry.id != only) continue;
    const Outcome outcome = entry.run();
    std::printf("criterion %d [%s] %s: %s\n", entry.id, outcome.pass ? "PASS" : "FAIL",
                entry.name, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
