#include "fsgd/lepski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsgd/errors.hpp"
#include "fsgd/schedule.hpp"

namespace fsgd {
namespace {

void check_config(const LepskiConfig& config) {
  if (!(config.s0 > 0.0) || !(config.s1 > config.s0) || !(config.A > 0.0) ||
      !(config.B > 0.0)) {
    throw DomainError("lepski config requires 0 < s0 < s1 and A, B > 0");
  }
}

}  // namespace

std::vector<double> lepski_grid(long i, const LepskiConfig& config) {
  check_config(config);
  if (i < 1) throw DomainError("step index must be >= 1");
  if (i <= 2) return {config.s0, config.s1};
  const double log_i = std::log(static_cast<double>(i));
  const long count = static_cast<long>(std::floor((config.s1 - config.s0) * log_i + 1e-12)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(count, 1L)));
  for (long m = 0; m < std::max(count, 1L); ++m) {
    grid.push_back(config.s0 + static_cast<double>(m) / log_i);
  }
  return grid;
}

long lepski_truncation(long i, double s, double B) {
  return detail::guarded_floor(B * std::pow(static_cast<double>(i), 1.0 / (2.0 * s + 1.0)));
}

double lepski_threshold(long i, double s) {
  const double log_i = std::log(static_cast<double>(i));
  return std::pow(static_cast<double>(i) / log_i, -2.0 * s / (2.0 * s + 1.0));
}

std::size_t lepski_choose(std::span<const double> truncation_sums,
                          std::span<const double> thresholds, double lhs_scale) {
  const std::size_t count = truncation_sums.size();
  if (count == 0) throw DomainError("empty candidate grid");
  // Condition for pair (a, b < a):
  //   lhs_scale * (sums[b] - sums[a]) <= thresholds[b]
  // i.e. lhs_scale * sums[a] >= lhs_scale * sums[b] - thresholds[b], so a
  // running prefix maximum over b settles every pair in one pass.
  double prefix_max = -std::numeric_limits<double>::infinity();
  std::size_t chosen = 0;
  for (std::size_t a = 0; a < count; ++a) {
    if (a > 0) {
      const std::size_t b = a - 1;
      prefix_max = std::max(prefix_max, lhs_scale * truncation_sums[b] - thresholds[b]);
      if (lhs_scale * truncation_sums[a] >= prefix_max) chosen = a;
    }
  }
  return chosen;
}

LepskiStepResult lepski_select_and_step(ModelState& state, std::span<const double> x,
                                        double y, const LepskiConfig& config,
                                        const LossGradient& loss) {
  check_config(config);
  const long i = state.steps() + 1;
  const double gamma = config.A / static_cast<double>(i);
  const std::vector<double> grid = lepski_grid(i, config);

  std::vector<long> truncations(grid.size());
  for (std::size_t l = 0; l < grid.size(); ++l) {
    truncations[l] = lepski_truncation(i, grid[l], config.B);
  }

  // Data-driven selection requires defined thresholds (i >= 3) and a
  // non-expansive update for the roughest candidate:
  //   gamma_i (1 + M^2 p J(i, s0)) <= 1.
  // During the start-up transient before that, residuals are not roughness
  // evidence; the top of the grid is used, whose truncation is
  // non-decreasing in i, so every coefficient written early keeps updating.
  const double m_sq = state.basis().bound() * state.basis().bound();
  const double rough_norm =
      gamma * (1.0 + m_sq * static_cast<double>(state.dim()) *
                         static_cast<double>(lepski_truncation(i, config.s0, config.B)));
  std::size_t chosen = grid.size() - 1;
  if (i >= 3 && rough_norm <= 1.0) {
    // T[q] = sum_k sum_{j<=q} psi_{jk}(x_k)^2, shared across candidates.
    const long max_truncation = truncations.front();
    std::vector<double> prefix(static_cast<std::size_t>(max_truncation) + 1, 0.0);
    std::vector<double> scratch(prefix.size());
    const auto& basis = state.basis();
    for (double coordinate : x) {
      basis.squared_prefix_sums(coordinate, scratch);
      for (std::size_t q = 0; q < prefix.size(); ++q) prefix[q] += scratch[q];
    }

    std::vector<double> sums(grid.size());
    std::vector<double> thresholds(grid.size());
    for (std::size_t l = 0; l < grid.size(); ++l) {
      sums[l] = prefix[static_cast<std::size_t>(truncations[l])];
      thresholds[l] = lepski_threshold(i, grid[l]);
    }
    const double r = loss.residual(y, state.predict(x));
    chosen = lepski_choose(sums, thresholds, gamma * gamma * r * r);
  }

  LepskiStepResult result;
  result.chosen_s = grid[chosen];
  result.truncation = truncations[chosen];
  result.residual = state.step(x, y, gamma, result.truncation, loss);
  return result;
}

}  // namespace fsgd
