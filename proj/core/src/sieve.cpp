#include "fsgd/sieve.hpp"

#include <cmath>

namespace fsgd {

SieveEstimator::SieveEstimator(BasisFamily basis, int dim, bool include_intercept,
                               double omega, bool average)
    : inner_(basis, dim, include_intercept),
      average_(basis, dim, include_intercept),
      omega_(omega),
      average_enabled_(average) {}

double SieveEstimator::step(std::span<const double> x, double y, double gamma,
                            long truncation, const LossGradient& loss) {
  while (static_cast<long>(weights_.size()) < truncation) {
    const double j = static_cast<double>(weights_.size() + 1);
    weights_.push_back(std::pow(j, -2.0 * omega_));
  }
  const double r = inner_.step(x, y, gamma, truncation, loss,
                               std::span<const double>(weights_.data(), weights_.size()));
  if (!average_enabled_) return r;

  const long i = inner_.steps();
  const double keep = static_cast<double>(i) / static_cast<double>(i + 1);
  const double take = 1.0 / static_cast<double>(i + 1);

  average_.set_intercept(keep * average_.intercept() + take * inner_.intercept());
  auto& avg = average_.mutable_coefficients();
  const auto& cur = inner_.coefficients();
  for (std::size_t k = 0; k < cur.size(); ++k) {
    if (avg[k].size() < cur[k].size()) avg[k].resize(cur[k].size(), 0.0);
    for (std::size_t j = 0; j < cur[k].size(); ++j) {
      avg[k][j] = keep * avg[k][j] + take * cur[k][j];
    }
  }
  average_.set_steps(i);
  return r;
}

}  // namespace fsgd
