// Sieve-SGD baseline: the inner iterate uses per-basis learning rates
// t_j = j^{-2 omega} and predictions come from the Polyak average of the
// iterates.

#pragma once

#include <span>

#include "fsgd/model.hpp"

namespace fsgd {

class SieveEstimator {
 public:
  // `average` can be turned off to expose the raw inner iterate; used to
  // check that the shared update path matches the plain estimator.
  SieveEstimator(BasisFamily basis, int dim, bool include_intercept, double omega,
                 bool average = true);

  // Updates the inner iterate with per-basis weights, then folds it into the
  // running average: f_i = (i/(i+1)) f_{i-1} + (1/(i+1)) g_i. Returns the
  // inner residual.
  double step(std::span<const double> x, double y, double gamma, long truncation,
              const LossGradient& loss);

  double predict(std::span<const double> x) const { return surface().predict(x); }

  const ModelState& inner() const noexcept { return inner_; }
  const ModelState& average() const noexcept { return average_; }
  // Prediction surface: the Polyak average, or the inner iterate when
  // averaging is off.
  const ModelState& surface() const noexcept { return average_enabled_ ? average_ : inner_; }

  long steps() const noexcept { return inner_.steps(); }
  double omega() const noexcept { return omega_; }

 private:
  ModelState inner_;
  ModelState average_;
  double omega_;
  bool average_enabled_;
  std::vector<double> weights_;  // t_j cache, grown on demand
};

}  // namespace fsgd
