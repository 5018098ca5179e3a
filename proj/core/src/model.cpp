#include "fsgd/model.hpp"

#include <cmath>
#include <sstream>

#include "fsgd/errors.hpp"

namespace fsgd {

ModelState::ModelState(BasisFamily basis, int dim, bool include_intercept)
    : basis_(basis), dim_(dim), include_intercept_(include_intercept) {
  if (dim < 1) throw DomainError("model dimension must be >= 1");
  beta_.resize(static_cast<std::size_t>(dim));
}

long ModelState::truncation() const noexcept {
  return beta_.empty() ? 0 : static_cast<long>(beta_[0].size());
}

void ModelState::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    std::ostringstream os;
    os << "covariate vector has " << x.size() << " entries, model expects " << dim_;
    throw DomainError(os.str());
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("covariate outside [0,1]");
    }
  }
}

double ModelState::predict(std::span<const double> x) const {
  check_point(x);
  double value = alpha_;
  for (int k = 0; k < dim_; ++k) {
    value += basis_.weighted_sum(x[static_cast<std::size_t>(k)], beta_[static_cast<std::size_t>(k)]);
  }
  return value;
}

double ModelState::step(std::span<const double> x, double y, double gamma, long truncation,
                        const LossGradient& loss, std::span<const double> weights) {
  check_point(x);
  if (!std::isfinite(y)) throw DomainError("response must be finite");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
  if (truncation < 0) throw DomainError("truncation must be >= 0");

  const long i = steps_ + 1;
  const double prediction = predict(x);
  const double r = loss.residual(y, prediction);
  const double scale = gamma * r;
  if (!std::isfinite(scale)) {
    throw DivergenceError("divergence at step " + std::to_string(i), i);
  }

  if (include_intercept_) alpha_ += scale;

  if (truncation > 0) {
    double probe = alpha_;
    for (int k = 0; k < dim_; ++k) {
      auto& coeffs = beta_[static_cast<std::size_t>(k)];
      if (static_cast<long>(coeffs.size()) < truncation) {
        coeffs.resize(static_cast<std::size_t>(truncation), 0.0);
      }
      std::span<double> updated(coeffs.data(), static_cast<std::size_t>(truncation));
      basis_.accumulate(x[static_cast<std::size_t>(k)], scale, updated, weights);
      for (double v : updated) probe += v;
    }
    if (!std::isfinite(probe)) {
      throw DivergenceError("divergence at step " + std::to_string(i), i);
    }
  } else if (!std::isfinite(alpha_)) {
    throw DivergenceError("divergence at step " + std::to_string(i), i);
  }

  steps_ = i;
  return r;
}

void ModelState::set_intercept(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("intercept must be finite");
  alpha_ = alpha;
}

void ModelState::set_steps(long steps) {
  if (steps < 0) throw DomainError("step counter must be >= 0");
  steps_ = steps;
}

void ModelState::set_coefficients(std::vector<std::vector<double>> beta) {
  if (static_cast<int>(beta.size()) != dim_) {
    throw DomainError("coefficient array count must equal the model dimension");
  }
  for (const auto& coeffs : beta) {
    for (double v : coeffs) {
      if (!std::isfinite(v)) throw DomainError("coefficients must be finite");
    }
  }
  beta_ = std::move(beta);
}

bool ModelState::operator==(const ModelState& other) const noexcept {
  return basis_.kind() == other.basis_.kind() && dim_ == other.dim_ &&
         include_intercept_ == other.include_intercept_ && alpha_ == other.alpha_ &&
         steps_ == other.steps_ && beta_ == other.beta_;
}

std::vector<FitSnapshot> fit_stream(ModelState& state, SampleStream& stream,
                                    const Schedule& schedule, const LossGradient& loss,
                                    std::span<const long> snapshot_steps) {
  std::vector<FitSnapshot> snapshots;
  std::size_t next_snapshot = 0;
  while (next_snapshot < snapshot_steps.size() &&
         snapshot_steps[next_snapshot] <= state.steps()) {
    ++next_snapshot;
  }
  Sample sample;
  while (stream.next(sample)) {
    const StepParams params = schedule.at(state.steps() + 1);
    state.step(sample.x, sample.y, params.gamma, params.truncation, loss);
    while (next_snapshot < snapshot_steps.size() &&
           snapshot_steps[next_snapshot] == state.steps()) {
      snapshots.push_back({state.steps(), state});
      ++next_snapshot;
    }
  }
  return snapshots;
}

}  // namespace fsgd
