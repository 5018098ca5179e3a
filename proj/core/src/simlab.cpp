#include "fsgd/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "fsgd/errors.hpp"
#include "fsgd/sieve.hpp"

namespace fsgd {
namespace {

// Substream ids inside one (seed, rep) pair.
constexpr std::uint64_t kDataSubstream = 0;
constexpr std::uint64_t kEvalSubstreamBase = 1000;

}  // namespace

double bernoulli4(double x) noexcept {
  return ((x - 2.0) * x + 1.0) * x * x - 1.0 / 30.0;
}

void validate(const Scenario& scenario) {
  if (scenario.p < 1) throw DomainError("scenario: p must be >= 1");
  if (scenario.n < 1) throw DomainError("scenario: n must be >= 1");
  if (scenario.reps < 1) throw DomainError("scenario: reps must be >= 1");
  if (!(scenario.noise_halfwidth >= 0.0)) {
    throw DomainError("scenario: noise halfwidth must be >= 0");
  }
  if (scenario.dgp == Dgp::UniformInterval) {
    if (!(scenario.lo >= 0.0 && scenario.lo < scenario.hi && scenario.hi <= 1.0)) {
      throw DomainError("scenario: interval bounds must satisfy 0 <= lo < hi <= 1");
    }
  }
  if (scenario.target == TargetFn::Bernoulli4Univariate && scenario.p != 1) {
    throw DomainError("scenario: the univariate target requires p = 1");
  }
}

void moving_average_circular(std::span<const double> u, std::span<double> out) {
  if (u.size() != out.size() || u.empty()) {
    throw DomainError("moving average requires matching non-empty vectors");
  }
  const std::size_t p = u.size();
  for (std::size_t k = 0; k < p; ++k) {
    const double prev = (k == 0) ? u[p - 1] : u[k - 1];
    out[k] = 0.5 * (prev + u[k]);
  }
}

void draw_x(const Scenario& scenario, Philox& rng, std::span<double> out) {
  if (static_cast<int>(out.size()) != scenario.p) {
    throw DomainError("draw_x output size must equal scenario.p");
  }
  switch (scenario.dgp) {
    case Dgp::UniformCube:
      for (double& v : out) v = rng.uniform01();
      return;
    case Dgp::MovingAverage: {
      std::vector<double> u(out.size());
      for (double& v : u) v = rng.uniform01();
      moving_average_circular(u, out);
      return;
    }
    case Dgp::UniformInterval:
      for (double& v : out) v = rng.uniform(scenario.lo, scenario.hi);
      return;
  }
  throw DomainError("unknown dgp");
}

double target_value(const Scenario& scenario, std::span<const double> x) {
  if (static_cast<int>(x.size()) != scenario.p) {
    throw DomainError("target input size must equal scenario.p");
  }
  switch (scenario.target) {
    case TargetFn::Bernoulli4Additive: {
      double value = 5.0;
      for (double v : x) value += bernoulli4(v);
      return value;
    }
    case TargetFn::Bernoulli4Univariate:
      return bernoulli4(x[0]);
  }
  throw DomainError("unknown target");
}

bool default_intercept(TargetFn target) noexcept {
  return target == TargetFn::Bernoulli4Additive;
}

TruthCoeffs project_truth(const Scenario& scenario, const BasisFamily& family,
                          long tail_cut, long quadrature_points) {
  if (tail_cut < 1) throw DomainError("tail_cut must be >= 1");
  TruthCoeffs truth;
  truth.tail_cut = tail_cut;
  truth.alpha = (scenario.target == TargetFn::Bernoulli4Additive) ? 5.0 : 0.0;
  truth.component = project_coeffs([](double x) { return bernoulli4(x); }, family,
                                   tail_cut, quadrature_points);
  const double component_norm_sq = integrate_simpson(
      [](double x) {
        const double b = bernoulli4(x);
        return b * b;
      },
      quadrature_points);
  double partial = 0.0;
  for (double theta : truth.component) partial += theta * theta;
  truth.tail_bound = std::max(0.0, component_norm_sq - partial);
  truth.norm_sq = truth.alpha * truth.alpha + scenario.p * component_norm_sq;
  return truth;
}

double mse_quadrature(const ModelState& state, const Scenario& scenario,
                      const TruthCoeffs& truth) {
  if (scenario.dgp != Dgp::UniformCube) {
    throw DomainError("quadrature MSE requires uniform-cube covariates; use Monte Carlo");
  }
  if (state.truncation() > truth.tail_cut) {
    throw DomainError("truth tail_cut is smaller than the stored model truncation");
  }
  const double alpha_err = state.intercept() - truth.alpha;
  double mse = alpha_err * alpha_err;
  const auto& beta = state.coefficients();
  for (const auto& coeffs : beta) {
    for (long j = 0; j < truth.tail_cut; ++j) {
      const double fitted = (j < static_cast<long>(coeffs.size()))
                                ? coeffs[static_cast<std::size_t>(j)]
                                : 0.0;
      const double diff = fitted - truth.component[static_cast<std::size_t>(j)];
      mse += diff * diff;
    }
  }
  return mse + static_cast<double>(scenario.p) * truth.tail_bound;
}

MonteCarloMse mse_monte_carlo(const std::function<double(std::span<const double>)>& predict,
                              const std::function<double(std::span<const double>)>& truth,
                              const Scenario& scenario, long points, Philox& rng) {
  if (points < 2) throw DomainError("Monte Carlo MSE requires at least 2 points");
  std::vector<double> x(static_cast<std::size_t>(scenario.p));
  double mean = 0.0;
  double m2 = 0.0;
  for (long t = 1; t <= points; ++t) {
    draw_x(scenario, rng, x);
    const double d = predict(x) - truth(x);
    const double sq = d * d;
    const double delta = sq - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (sq - mean);
  }
  const double variance = m2 / static_cast<double>(points - 1);
  return {mean, std::sqrt(variance / static_cast<double>(points))};
}

MonteCarloMse mse_monte_carlo(const ModelState& state, const Scenario& scenario,
                              long points, Philox& rng) {
  return mse_monte_carlo(
      [&state](std::span<const double> x) { return state.predict(x); },
      [&scenario](std::span<const double> x) { return target_value(scenario, x); },
      scenario, points, rng);
}

std::vector<long> default_eval_grid(long n, int per_decade, long start) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (per_decade < 1) per_decade = 1;
  std::vector<long> grid;
  for (long k = 0;; ++k) {
    const double value = std::pow(10.0, static_cast<double>(k) / per_decade);
    if (value >= static_cast<double>(n)) break;
    const long step = std::lround(value);
    if (step >= start && step < n && (grid.empty() || step != grid.back())) {
      grid.push_back(step);
    }
  }
  if (grid.empty() || grid.back() != n) grid.push_back(n);
  return grid;
}

double fit_loglog_slope(std::span<const EvalRow> rows, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long count = 0;
  for (const EvalRow& row : rows) {
    if (row.n < lo || row.n > hi) continue;
    if (!(row.mse_mean > 0.0)) continue;
    const double x = std::log10(static_cast<double>(row.n));
    const double y = std::log10(row.mse_mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw DomainError("slope fit needs at least two rows inside the window");
  const double denom = sxx - sx * sx / count;
  if (denom == 0.0) throw DomainError("slope fit window has no spread in n");
  return (sxy - sx * sy / count) / denom;
}

namespace {

// One replication's estimator behind a single consume/evaluate interface.
class Driver {
 public:
  Driver(const Scenario& scenario, const EstimatorConfig& config, const BasisFamily& basis)
      : config_(config), loss_(LossGradient::squared()) {
    const bool intercept =
        config.include_intercept.value_or(default_intercept(scenario.target));
    switch (config.kind) {
      case EstimatorKind::Fsgd:
      case EstimatorKind::Lepski:
        model_.emplace(basis, scenario.p, intercept);
        break;
      case EstimatorKind::Sieve:
        sieve_.emplace(basis, scenario.p, intercept, config.sieve_omega);
        break;
    }
  }

  // Returns the chosen s for the adaptive estimator, 0 otherwise.
  double consume(std::span<const double> x, double y) {
    switch (config_.kind) {
      case EstimatorKind::Fsgd: {
        const StepParams params = config_.schedule.at(model_->steps() + 1);
        model_->step(x, y, params.gamma, params.truncation, loss_);
        return 0.0;
      }
      case EstimatorKind::Sieve: {
        const StepParams params = config_.schedule.at(sieve_->steps() + 1);
        sieve_->step(x, y, params.gamma, params.truncation, loss_);
        return 0.0;
      }
      case EstimatorKind::Lepski:
        return lepski_select_and_step(*model_, x, y, config_.lepski, loss_).chosen_s;
    }
    throw DomainError("unknown estimator kind");
  }

  // The state whose predictions are evaluated (the Polyak average for sieve).
  const ModelState& surface() const {
    return config_.kind == EstimatorKind::Sieve ? sieve_->surface() : *model_;
  }

 private:
  EstimatorConfig config_;
  LossGradient loss_;
  std::optional<ModelState> model_;
  std::optional<SieveEstimator> sieve_;
};

long max_truncation_bound(const Scenario& scenario, const EstimatorConfig& config) {
  if (config.kind == EstimatorKind::Lepski) {
    return lepski_truncation(scenario.n, config.lepski.s0, config.lepski.B);
  }
  long best = 0;
  // J rules are monotone-ish in i; scan coarsely plus the endpoint.
  for (long i = 1; i <= scenario.n; i = std::max(i + 1, i + i / 64)) {
    best = std::max(best, config.schedule.at(i).truncation);
  }
  best = std::max(best, config.schedule.at(scenario.n).truncation);
  return best;
}

}  // namespace

EvalReport run_experiment(const Scenario& scenario, const EstimatorConfig& estimator,
                          const ExperimentOptions& options) {
  validate(scenario);
  const BasisFamily basis = BasisFamily::trigonometric();

  std::vector<long> eval_points = options.eval_points.empty()
                                      ? default_eval_grid(scenario.n)
                                      : options.eval_points;
  if (!std::is_sorted(eval_points.begin(), eval_points.end())) {
    throw DomainError("eval points must be sorted ascending");
  }
  if (!eval_points.empty() && (eval_points.front() < 1 || eval_points.back() > scenario.n)) {
    throw DomainError("eval points must lie in [1, n]");
  }

  const bool quadrature = scenario.dgp == Dgp::UniformCube;
  TruthCoeffs truth;
  if (quadrature) {
    long tail_cut = options.tail_cut;
    if (tail_cut <= 0) tail_cut = std::max(512L, max_truncation_bound(scenario, estimator));
    truth = project_truth(scenario, basis, tail_cut);
  }

  EvalReport report;
  report.per_rep.assign(static_cast<std::size_t>(scenario.reps),
                        std::vector<double>(eval_points.size(), 0.0));
  if (options.record_chosen_s && estimator.kind == EstimatorKind::Lepski) {
    report.chosen_s.assign(static_cast<std::size_t>(scenario.reps), {});
  }

  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(scenario.reps));
  std::atomic<int> next_rep{0};

  const auto run_rep = [&](int rep) {
    Philox data_rng(scenario.seed, static_cast<std::uint64_t>(rep), kDataSubstream);
    Driver driver(scenario, estimator, basis);
    std::vector<double> x(static_cast<std::size_t>(scenario.p));
    auto& mse_row = report.per_rep[static_cast<std::size_t>(rep)];
    std::vector<double>* s_log =
        report.chosen_s.empty() ? nullptr : &report.chosen_s[static_cast<std::size_t>(rep)];
    if (s_log) s_log->reserve(static_cast<std::size_t>(scenario.n));

    std::size_t point = 0;
    while (point < eval_points.size() && eval_points[point] < 1) ++point;
    for (long i = 1; i <= scenario.n && point < eval_points.size(); ++i) {
      draw_x(scenario, data_rng, x);
      const double y = target_value(scenario, x) + data_rng.symmetric(scenario.noise_halfwidth);
      const double chosen = driver.consume(x, y);
      if (s_log) s_log->push_back(chosen);
      while (point < eval_points.size() && eval_points[point] == i) {
        if (quadrature) {
          mse_row[point] = mse_quadrature(driver.surface(), scenario, truth);
        } else {
          Philox eval_rng(scenario.seed, static_cast<std::uint64_t>(rep),
                          kEvalSubstreamBase + point);
          mse_row[point] =
              mse_monte_carlo(driver.surface(), scenario, options.mc_points, eval_rng).value;
        }
        ++point;
      }
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || scenario.reps == 1) {
    for (int rep = 0; rep < scenario.reps; ++rep) {
      try {
        run_rep(rep);
      } catch (...) {
        failures[static_cast<std::size_t>(rep)] = std::current_exception();
        break;
      }
    }
  } else {
    std::vector<std::thread> pool;
    const int workers = std::min(threads, scenario.reps);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (int rep = next_rep.fetch_add(1); rep < scenario.reps;
             rep = next_rep.fetch_add(1)) {
          try {
            run_rep(rep);
          } catch (...) {
            failures[static_cast<std::size_t>(rep)] = std::current_exception();
          }
        }
      });
    }
    for (auto& worker : pool) worker.join();
  }

  for (int rep = 0; rep < scenario.reps; ++rep) {
    if (!failures[static_cast<std::size_t>(rep)]) continue;
    try {
      std::rethrow_exception(failures[static_cast<std::size_t>(rep)]);
    } catch (const DivergenceError& e) {
      std::ostringstream os;
      os << "replication " << rep << ": " << e.what();
      throw DivergenceError(os.str(), e.step());
    }
  }

  report.rows.reserve(eval_points.size());
  for (std::size_t point = 0; point < eval_points.size(); ++point) {
    double mean = 0.0;
    for (int rep = 0; rep < scenario.reps; ++rep) {
      mean += report.per_rep[static_cast<std::size_t>(rep)][point];
    }
    mean /= scenario.reps;
    double var = 0.0;
    for (int rep = 0; rep < scenario.reps; ++rep) {
      const double d = report.per_rep[static_cast<std::size_t>(rep)][point] - mean;
      var += d * d;
    }
    const double std_error =
        scenario.reps > 1 ? std::sqrt(var / (scenario.reps - 1) / scenario.reps) : 0.0;
    report.rows.push_back({eval_points[point], mean, std_error});
  }

  report.window_lo = options.fit_window_lo > 0.0
                         ? options.fit_window_lo
                         : static_cast<double>(scenario.n) / 10.0;
  report.window_hi =
      options.fit_window_hi > 0.0 ? options.fit_window_hi : static_cast<double>(scenario.n);
  report.target_slope = options.target_slope;
  try {
    report.slope = fit_loglog_slope(report.rows, report.window_lo, report.window_hi);
  } catch (const DomainError&) {
    report.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace fsgd
