// Online smoothness selection: at each step pick the largest candidate s
// whose truncation is statistically indistinguishable from every rougher
// candidate, then run one F-SGD update at that truncation.

#pragma once

#include <span>
#include <vector>

#include "fsgd/model.hpp"

namespace fsgd {

struct LepskiConfig {
  double s0 = 0.5;  // grid lower end
  double s1 = 8.0;  // grid upper end
  double A = 3.0;   // gamma_i = A/i
  double B = 3.0;   // J_{i,l} = floor(B i^{1/(2 s_l + 1)})
};

// Candidate grid {s0, s0 + 1/log i, ...} up to the largest value <= s1.
// For i <= 2 the spacing is degenerate and the grid falls back to {s0, s1}.
std::vector<double> lepski_grid(long i, const LepskiConfig& config);

// floor(B i^{1/(2s+1)}).
long lepski_truncation(long i, double s, double B);

// (i / log i)^{-2s/(2s+1)}; requires log i > 1, i.e. i >= 3.
double lepski_threshold(long i, double s);

// Pure selection rule. truncation_sums[a] is the summed squared-basis prefix
// at candidate a's truncation, thresholds[b] the budget for rougher candidate
// b, and lhs_scale = gamma^2 r^2. Returns the index of the largest candidate
// a such that lhs_scale * (truncation_sums[b] - truncation_sums[a]) <=
// thresholds[b] for every b < a. Candidates are ordered by increasing s, so
// truncation_sums is non-increasing.
std::size_t lepski_choose(std::span<const double> truncation_sums,
                          std::span<const double> thresholds, double lhs_scale);

struct LepskiStepResult {
  double chosen_s = 0.0;
  long truncation = 0;
  double residual = 0.0;
};

// One adaptive step: builds the grid for i = state.steps()+1, selects s,
// then applies state.step with (A/i, J_{i,a}). Selection only becomes
// data-driven from i >= 3 (the thresholds are undefined before); earlier
// steps take the top of the grid, matching the zero-residual behavior.
LepskiStepResult lepski_select_and_step(ModelState& state, std::span<const double> x,
                                        double y, const LepskiConfig& config,
                                        const LossGradient& loss);

}  // namespace fsgd
