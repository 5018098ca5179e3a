// F-SGD model state: intercept + per-coordinate coefficient arrays, the
// coefficient-space form of the functional update, and stream fitting.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fsgd/basis.hpp"
#include "fsgd/schedule.hpp"

namespace fsgd {

struct Sample {
  std::vector<double> x;  // covariates, each in [0,1]
  double y = 0.0;
};

enum class LossKind { Squared };

// Gradient hook for convex losses; only squared loss ships. residual() is
// -dl(u,v)/dv evaluated at (y, prediction), the scale of one update.
struct LossGradient {
  LossKind kind = LossKind::Squared;

  double residual(double y, double prediction) const { return y - prediction; }

  static LossGradient squared() { return {}; }
};

class ModelState {
 public:
  ModelState(BasisFamily basis, int dim, bool include_intercept);

  int dim() const noexcept { return dim_; }
  bool has_intercept() const noexcept { return include_intercept_; }
  long steps() const noexcept { return steps_; }
  double intercept() const noexcept { return alpha_; }
  const BasisFamily& basis() const noexcept { return basis_; }

  // coefficients()[k][j-1] multiplies psi_j applied to coordinate k.
  const std::vector<std::vector<double>>& coefficients() const noexcept { return beta_; }

  // Stored coefficient count per coordinate (the largest truncation seen).
  long truncation() const noexcept;

  double predict(std::span<const double> x) const;

  // One SGD update with step size gamma and truncation level J; returns the
  // residual used. Non-empty `weights` multiplies the increment of basis j
  // by weights[j-1] (per-basis learning rates for the sieve baseline).
  double step(std::span<const double> x, double y, double gamma, long truncation,
              const LossGradient& loss, std::span<const double> weights = {});

  // Low-level state editing for persistence and averaging.
  void set_intercept(double alpha);
  void set_steps(long steps);
  void set_coefficients(std::vector<std::vector<double>> beta);
  std::vector<std::vector<double>>& mutable_coefficients() noexcept { return beta_; }

  bool operator==(const ModelState& other) const noexcept;

 private:
  void check_point(std::span<const double> x) const;

  BasisFamily basis_;
  int dim_;
  bool include_intercept_;
  double alpha_ = 0.0;
  long steps_ = 0;
  std::vector<std::vector<double>> beta_;
};

// Pull-based sample source consumed by fit_stream.
class SampleStream {
 public:
  virtual ~SampleStream() = default;
  virtual bool next(Sample& out) = 0;
};

class VectorStream final : public SampleStream {
 public:
  explicit VectorStream(std::vector<Sample> samples) : samples_(std::move(samples)) {}
  bool next(Sample& out) override {
    if (index_ >= samples_.size()) return false;
    out = samples_[index_++];
    return true;
  }

 private:
  std::vector<Sample> samples_;
  std::size_t index_ = 0;
};

struct FitSnapshot {
  long at_step = 0;
  ModelState state;
};

// Folds step() over the stream with (gamma_i, J_i) = schedule.at(i) for
// i = state.steps()+1, ...; deep-copies the state at each requested step
// count (sorted ascending). Divergence errors carry the failing index.
std::vector<FitSnapshot> fit_stream(ModelState& state, SampleStream& stream,
                                    const Schedule& schedule, const LossGradient& loss,
                                    std::span<const long> snapshot_steps = {});

}  // namespace fsgd
