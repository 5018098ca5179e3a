// Centered, uniformly bounded orthonormal basis families on [0,1].
//
// The default family is the trigonometric basis without the constant term:
//   psi_{2k-1}(x) = sqrt(2) sin(2 pi k x),  psi_{2k}(x) = sqrt(2) cos(2 pi k x)
// for k = 1, 2, ...  All members integrate to zero, are pairwise orthonormal
// with respect to Lebesgue measure, and are bounded by sqrt(2).

#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace fsgd {

enum class BasisKind { TrigCentered };

// A coefficient sequence theta_1..theta_J over a basis family.
using CoefficientVector = std::vector<double>;

class BasisFamily {
 public:
  static BasisFamily trigonometric() { return BasisFamily(BasisKind::TrigCentered, 2.0); }

  // Parses the CLI/checkpoint name ("trig"); throws DomainError otherwise.
  static BasisFamily from_name(std::string_view name);

  BasisKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  // Uniform sup-norm bound M of all members (sqrt(2) for the trig family).
  double bound() const noexcept;

  // psi_j(x) for j >= 1, x in [0,1].
  double eval(long j, double x) const;

  // Writes psi_1(x)..psi_J(x) where J = out.size().
  void eval_prefix(double x, std::span<double> out) const;
  std::vector<double> eval_prefix(double x, long count) const;

  // sum_j coeffs[j-1] * psi_j(x); the prediction kernel.
  double weighted_sum(double x, std::span<const double> coeffs) const;

  // coeffs[j-1] += scale * psi_j(x) for j <= coeffs.size(); the update kernel.
  // When `weights` is non-empty it additionally multiplies term j by
  // weights[j-1] (per-basis learning rates).
  void accumulate(double x, double scale, std::span<double> coeffs,
                  std::span<const double> weights = {}) const;

  // out[m] = sum_{j<=m} psi_j(x)^2 for m = 0..out.size()-1 (out[0] = 0).
  void squared_prefix_sums(double x, std::span<double> out) const;

 private:
  BasisFamily(BasisKind kind, double bound_sq) : kind_(kind), bound_sq_(bound_sq) {}

  BasisKind kind_;
  double bound_sq_;
};

// Squared Sobolev norm sum_j (j^s theta_j)^2 of a finite coefficient vector.
double sobolev_norm_sq(std::span<const double> coeffs, double s);

// Composite Simpson rule over [0,1] with `intervals` subdivisions.
double integrate_simpson(const std::function<double(double)>& f, long intervals);

// Expansion coefficients theta_j ~= integral f(x) psi_j(x) dx for j = 1..count,
// computed by composite Simpson quadrature with `quadrature_points` intervals.
CoefficientVector project_coeffs(const std::function<double(double)>& f,
                                 const BasisFamily& family, long count,
                                 long quadrature_points = 100000);

}  // namespace fsgd
