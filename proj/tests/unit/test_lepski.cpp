#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsgd/errors.hpp"
#include "fsgd/lepski.hpp"
#include "fsgd/rng.hpp"
#include "fsgd/schedule.hpp"

using namespace fsgd;

namespace {

const auto kBasis = BasisFamily::trigonometric();
const auto kLoss = LossGradient::squared();

// Quadratic-time reference for the selection rule: test every (a, b) pair
// against the inequality directly.
std::size_t brute_force_choose(const std::vector<double>& sums,
                               const std::vector<double>& thresholds, double lhs_scale) {
  std::size_t chosen = 0;
  for (std::size_t a = 0; a < sums.size(); ++a) {
    bool admissible = true;
    for (std::size_t b = 0; b < a; ++b) {
      if (lhs_scale * (sums[b] - sums[a]) > thresholds[b]) {
        admissible = false;
        break;
      }
    }
    if (admissible) chosen = a;
  }
  return chosen;
}

}  // namespace

TEST_CASE("candidate grid") {
  const LepskiConfig config{0.5, 8.0, 1.0, 1.0};

  const auto degenerate = lepski_grid(1, config);
  REQUIRE(degenerate.size() == 2);
  CHECK(degenerate[0] == 0.5);
  CHECK(degenerate[1] == 8.0);

  const auto narrow = lepski_grid(3, LepskiConfig{0.5, 1.5, 1.0, 1.0});
  REQUIRE(narrow.size() == 2);
  CHECK(narrow[0] == 0.5);
  CHECK(narrow[1] == doctest::Approx(0.5 + 1.0 / std::log(3.0)).epsilon(1e-15));

  // Spacing wider than the range collapses the grid to its lower end.
  const auto collapsed = lepski_grid(3, LepskiConfig{0.5, 1.2, 1.0, 1.0});
  REQUIRE(collapsed.size() == 1);
  CHECK(collapsed[0] == 0.5);

  // Direct enumeration oracle for the grid size at i = 1e5.
  const auto grid = lepski_grid(100000, config);
  const double spacing = 1.0 / std::log(100000.0);
  std::size_t expected = 0;
  while (0.5 + expected * spacing <= 8.0 + 1e-12) ++expected;
  CHECK(grid.size() == expected);
  CHECK(grid.size() == 87);
  CHECK(grid.back() <= 8.0 + 1e-12);
  for (std::size_t m = 1; m < grid.size(); ++m) {
    CHECK(grid[m] - grid[m - 1] == doctest::Approx(spacing).epsilon(1e-12));
  }
}

TEST_CASE("truncation is non-increasing in s") {
  Philox rng(61);
  for (int t = 0; t < 200; ++t) {
    const long i = 3 + static_cast<long>(rng.uniform01() * 100000);
    const double B = rng.uniform(0.5, 4.0);
    const auto grid = lepski_grid(i, LepskiConfig{0.5, 8.0, 1.0, B});
    for (std::size_t m = 1; m < grid.size(); ++m) {
      REQUIRE(lepski_truncation(i, grid[m], B) <= lepski_truncation(i, grid[m - 1], B));
    }
  }
}

TEST_CASE("selection agrees with the pairwise reference and scales freely") {
  Philox rng(67);
  for (int t = 0; t < 500; ++t) {
    const std::size_t count = 2 + static_cast<std::size_t>(rng.uniform01() * 30);
    std::vector<double> sums(count);
    std::vector<double> thresholds(count);
    // Assigned from the top of the grid down so sums is non-increasing.
    double running = rng.uniform(0.0, 5.0);
    for (std::size_t m = count; m-- > 0;) {
      sums[m] = running;
      running += rng.uniform(0.0, 2.0);
      thresholds[m] = rng.uniform(0.0, 1.5);
    }
    const double lhs = rng.uniform(0.0, 3.0);
    const std::size_t chosen = lepski_choose(sums, thresholds, lhs);
    CHECK(chosen == brute_force_choose(sums, thresholds, lhs));

    // Pure inequality: common positive scaling cannot change the decision.
    const double c = rng.uniform(0.1, 50.0);
    std::vector<double> scaled_thresholds = thresholds;
    for (double& v : scaled_thresholds) v *= c;
    CHECK(lepski_choose(sums, scaled_thresholds, lhs * c) == chosen);
  }
}

TEST_CASE("reference walk-through at i = 100") {
  // i=100, p=1, A=1, B=3: the roughest candidate keeps 30 basis functions,
  // the smoothest 3; thresholds follow (i/log i)^(-2s/(2s+1)).
  const LepskiConfig config{0.5, 8.0, 1.0, 3.0};
  const long i = 100;
  CHECK(lepski_truncation(i, 0.5, 3.0) == 30);
  CHECK(lepski_truncation(i, 8.0, 3.0) == 3);
  CHECK(lepski_threshold(i, 0.5) ==
        doctest::Approx(std::pow(100.0 / std::log(100.0), -0.5)).epsilon(1e-15));

  ModelState state(kBasis, 1, false);
  state.set_steps(i - 1);
  const std::vector<double> x{0.377};
  const double y = 1.0;  // residual r = 1 against the zero state

  ModelState manual = state;
  const auto result = lepski_select_and_step(state, x, y, config, kLoss);

  // Reference decision: brute-force pairwise evaluation of the inequality.
  const auto grid = lepski_grid(i, config);
  std::vector<double> sums(grid.size());
  std::vector<double> thresholds(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const long truncation = lepski_truncation(i, grid[m], 3.0);
    double total = 0.0;
    for (long j = 1; j <= truncation; ++j) {
      const double v = kBasis.eval(j, x[0]);
      total += v * v;
    }
    sums[m] = total;
    thresholds[m] = lepski_threshold(i, grid[m]);
  }
  const double gamma = 1.0 / static_cast<double>(i);
  const std::size_t expected = brute_force_choose(sums, thresholds, gamma * gamma);
  CHECK(result.chosen_s == grid[expected]);

  // The produced state is exactly one plain update at the chosen truncation.
  manual.step(x, y, gamma, lepski_truncation(i, result.chosen_s, 3.0), kLoss);
  CHECK(state == manual);
}

TEST_CASE("zero residual always selects the top of the grid") {
  const LepskiConfig config{0.5, 8.0, 1.0, 3.0};
  for (long step_before : {0L, 1L, 5L, 99L, 4999L}) {
    ModelState state(kBasis, 1, false);
    state.set_steps(step_before);
    const auto grid = lepski_grid(step_before + 1, config);
    const auto result =
        lepski_select_and_step(state, std::vector<double>{0.61}, 0.0, config, kLoss);
    CHECK(result.chosen_s == grid.back());
  }
}

TEST_CASE("overwhelming residual falls back to the grid minimum") {
  const LepskiConfig config{0.5, 8.0, 1.0, 3.0};
  ModelState state(kBasis, 1, false);
  state.set_steps(999);  // past the stability gate for A=1, B=3
  const auto result =
      lepski_select_and_step(state, std::vector<double>{0.377}, 1e9, config, kLoss);
  CHECK(result.chosen_s == 0.5);
  CHECK(result.truncation == lepski_truncation(1000, 0.5, 3.0));
}

TEST_CASE("equal truncations across the grid select the largest candidate") {
  // i=3 with B=0.4 keeps zero basis functions for every candidate: all the
  // pair sums are empty, so the inequality holds vacuously everywhere.
  const LepskiConfig config{0.5, 8.0, 1.0, 0.4};
  ModelState state(kBasis, 1, false);
  state.set_steps(2);
  const auto grid = lepski_grid(3, config);
  const auto result =
      lepski_select_and_step(state, std::vector<double>{0.2}, 5.0, config, kLoss);
  CHECK(result.truncation == 0);
  CHECK(result.chosen_s == grid.back());
}

TEST_CASE("before activation the smoothest candidate drives the update") {
  const LepskiConfig config{0.5, 8.0, 3.0, 3.0};
  ModelState state(kBasis, 1, false);
  // i = 10 is past i >= 3 but gamma (1 + M^2 J(s0)) = 0.3 (1 + 2*9) > 1.
  state.set_steps(9);
  const auto grid = lepski_grid(10, config);
  const auto result =
      lepski_select_and_step(state, std::vector<double>{0.377}, 100.0, config, kLoss);
  CHECK(result.chosen_s == grid.back());
}
