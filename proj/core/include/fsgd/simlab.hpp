// Simulation lab: data-generating processes, ground-truth targets, MSE
// evaluation (coefficient-space quadrature and Monte Carlo), and the
// replication harness with log-log slope fits.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fsgd/basis.hpp"
#include "fsgd/lepski.hpp"
#include "fsgd/model.hpp"
#include "fsgd/rng.hpp"
#include "fsgd/schedule.hpp"

namespace fsgd {

enum class Dgp {
  UniformCube,      // X uniform on [0,1]^p
  MovingAverage,    // X^(k) = (U^(k-1) + U^(k))/2, circular, U uniform cube
  UniformInterval,  // p = 1, X uniform on [lo, hi]
};

enum class TargetFn {
  Bernoulli4Additive,    // f(x) = 5 + sum_k B4(x^(k))
  Bernoulli4Univariate,  // f(x) = B4(x)
};

// B4(x) = x^4 - 2x^3 + x^2 - 1/30.
double bernoulli4(double x) noexcept;

struct Scenario {
  int p = 1;
  Dgp dgp = Dgp::UniformCube;
  double lo = 0.0, hi = 1.0;  // UniformInterval support
  TargetFn target = TargetFn::Bernoulli4Univariate;
  double noise_halfwidth = 0.0;  // noise uniform on [-w, w]
  long n = 100000;
  int reps = 20;
  std::uint64_t seed = 1;
};

void validate(const Scenario& scenario);  // throws DomainError

// out[k] = (u[k-1] + u[k])/2 with the circular convention u[-1] = u[p-1].
void moving_average_circular(std::span<const double> u, std::span<double> out);

void draw_x(const Scenario& scenario, Philox& rng, std::span<double> out);
double target_value(const Scenario& scenario, std::span<const double> x);

// The additive target carries the intercept; the univariate one does not.
bool default_intercept(TargetFn target) noexcept;

// Per-component expansion of the scenario target, produced by the quadrature
// oracle. `tail_bound` is the mass beyond `tail_cut` per component.
struct TruthCoeffs {
  double alpha = 0.0;
  CoefficientVector component;
  double tail_bound = 0.0;
  long tail_cut = 0;
  double norm_sq = 0.0;  // ||f||^2 under the uniform cube
};

TruthCoeffs project_truth(const Scenario& scenario, const BasisFamily& family,
                          long tail_cut = 512, long quadrature_points = 100000);

// Exact coefficient-space MSE, valid only when the covariates are uniform on
// the cube (Parseval):
//   (alpha_hat - alpha)^2 + sum_k sum_{j<=cut} (beta_kj - theta_j)^2 + p*tail.
double mse_quadrature(const ModelState& state, const Scenario& scenario,
                      const TruthCoeffs& truth);

struct MonteCarloMse {
  double value = 0.0;
  double std_error = 0.0;
};

MonteCarloMse mse_monte_carlo(const ModelState& state, const Scenario& scenario,
                              long points, Philox& rng);
// Generic form for arbitrary prediction/truth surfaces.
MonteCarloMse mse_monte_carlo(const std::function<double(std::span<const double>)>& predict,
                              const std::function<double(std::span<const double>)>& truth,
                              const Scenario& scenario, long points, Philox& rng);

enum class EstimatorKind { Fsgd, Sieve, Lepski };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Fsgd;
  Schedule schedule = Schedule::constant(0.0, 0);  // fsgd and sieve
  LepskiConfig lepski{};
  double sieve_omega = 2.0;                  // t_j = j^(-2 omega)
  std::optional<bool> include_intercept{};   // default decided by the target
};

struct EvalRow {
  long n = 0;
  double mse_mean = 0.0;
  double mse_std_error = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;                 // sorted by n
  std::vector<std::vector<double>> per_rep;  // per_rep[rep][point]
  double slope = 0.0;
  double target_slope = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  // chosen_s[rep][i-1] for the adaptive estimator, filled on request.
  std::vector<std::vector<double>> chosen_s;
};

struct ExperimentOptions {
  std::vector<long> eval_points;  // empty: default log grid up to n
  long mc_points = 100000;        // Monte Carlo draws per evaluation
  int threads = 1;                // replication parallelism
  double fit_window_lo = 0.0;     // 0: last decade [n/10, n]
  double fit_window_hi = 0.0;
  double target_slope = -0.8;
  long tail_cut = 0;              // 0: derived from the schedule, min 512
  bool record_chosen_s = false;
};

// Streams scenario.n samples through a fresh estimator per replication,
// evaluates the MSE at each requested step count, and aggregates across
// replications. Output is independent of the thread count.
EvalReport run_experiment(const Scenario& scenario, const EstimatorConfig& estimator,
                          const ExperimentOptions& options = {});

// Log-spaced step counts (per_decade points per decade) from `start` to n.
std::vector<long> default_eval_grid(long n, int per_decade = 8, long start = 100);

// OLS slope of log10(mse_mean) on log10(n) over rows with lo <= n <= hi.
double fit_loglog_slope(std::span<const EvalRow> rows, double lo, double hi);

}  // namespace fsgd
