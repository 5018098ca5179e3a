#include "fsgd/basis.hpp"

#include <cmath>
#include <numbers>

#include "fsgd/errors.hpp"

namespace fsgd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Re-anchor the sin/cos recurrence with a direct libm call every few terms
// so rounding drift stays far below the tolerances tests rely on.
constexpr long kAnchorEvery = 32;

void check_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("basis evaluation point outside [0,1]");
  }
}

// Walks psi_1(x), psi_2(x), ... calling visit(j, value) for j = 1..count.
// Terms come in (sin, cos) pairs sharing the frequency index k.
template <typename Visit>
inline void walk_trig(double x, long count, Visit&& visit) {
  if (count <= 0) return;
  const double angle = kTwoPi * x;
  const double c1 = std::cos(angle);
  const double s1 = std::sin(angle);
  double ck = c1;
  double sk = s1;
  long j = 1;
  for (long k = 1; j <= count; ++k) {
    if (k > 1) {
      if (k % kAnchorEvery == 0) {
        ck = std::cos(angle * static_cast<double>(k));
        sk = std::sin(angle * static_cast<double>(k));
      } else {
        const double c = ck * c1 - sk * s1;
        const double s = sk * c1 + ck * s1;
        ck = c;
        sk = s;
      }
    }
    visit(j++, kSqrt2 * sk);
    if (j > count) break;
    visit(j++, kSqrt2 * ck);
  }
}

}  // namespace

BasisFamily BasisFamily::from_name(std::string_view name) {
  if (name == "trig") return trigonometric();
  throw DomainError("unknown basis family: " + std::string(name));
}

std::string_view BasisFamily::name() const noexcept { return "trig"; }

double BasisFamily::bound() const noexcept { return std::sqrt(bound_sq_); }

double BasisFamily::eval(long j, double x) const {
  if (j < 1) throw DomainError("basis index must be >= 1");
  check_x(x);
  const double k = static_cast<double>((j + 1) / 2);
  const double angle = kTwoPi * k * x;
  return (j % 2 == 1) ? kSqrt2 * std::sin(angle) : kSqrt2 * std::cos(angle);
}

void BasisFamily::eval_prefix(double x, std::span<double> out) const {
  check_x(x);
  walk_trig(x, static_cast<long>(out.size()), [&](long j, double v) { out[j - 1] = v; });
}

std::vector<double> BasisFamily::eval_prefix(double x, long count) const {
  if (count < 0) throw DomainError("prefix length must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(count));
  eval_prefix(x, out);
  return out;
}

double BasisFamily::weighted_sum(double x, std::span<const double> coeffs) const {
  check_x(x);
  double acc = 0.0;
  walk_trig(x, static_cast<long>(coeffs.size()),
            [&](long j, double v) { acc += coeffs[j - 1] * v; });
  return acc;
}

void BasisFamily::accumulate(double x, double scale, std::span<double> coeffs,
                             std::span<const double> weights) const {
  check_x(x);
  if (!weights.empty() && weights.size() < coeffs.size()) {
    throw DomainError("weight vector shorter than coefficient vector");
  }
  if (weights.empty()) {
    walk_trig(x, static_cast<long>(coeffs.size()),
              [&](long j, double v) { coeffs[j - 1] += scale * v; });
  } else {
    walk_trig(x, static_cast<long>(coeffs.size()),
              [&](long j, double v) { coeffs[j - 1] += scale * weights[j - 1] * v; });
  }
}

void BasisFamily::squared_prefix_sums(double x, std::span<double> out) const {
  if (out.empty()) return;
  check_x(x);
  out[0] = 0.0;
  walk_trig(x, static_cast<long>(out.size()) - 1,
            [&](long j, double v) { out[j] = out[j - 1] + v * v; });
}

double sobolev_norm_sq(std::span<const double> coeffs, double s) {
  if (!(s > 0.0)) throw DomainError("smoothness s must be > 0");
  double acc = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double term = std::pow(static_cast<double>(j + 1), s) * coeffs[j];
    acc += term * term;
  }
  return acc;
}

double integrate_simpson(const std::function<double(double)>& f, long intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = 1.0 / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (long t = 1; t < intervals; ++t) {
    const double v = f(static_cast<double>(t) * h);
    if (t % 2 == 1) {
      odd += v;
    } else {
      even += v;
    }
  }
  return (f(0.0) + f(1.0) + 4.0 * odd + 2.0 * even) * h / 3.0;
}

CoefficientVector project_coeffs(const std::function<double(double)>& f,
                                 const BasisFamily& family, long count,
                                 long quadrature_points) {
  if (count < 1) throw DomainError("coefficient count must be >= 1");
  long intervals = quadrature_points;
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;

  CoefficientVector theta(static_cast<std::size_t>(count), 0.0);
  std::vector<double> basis(static_cast<std::size_t>(count));
  const double h = 1.0 / static_cast<double>(intervals);
  for (long t = 0; t <= intervals; ++t) {
    const double x = (t == intervals) ? 1.0 : static_cast<double>(t) * h;
    double w = (t == 0 || t == intervals) ? 1.0 : (t % 2 == 1 ? 4.0 : 2.0);
    const double fx = w * f(x);
    family.eval_prefix(x, basis);
    for (long j = 0; j < count; ++j) theta[j] += fx * basis[j];
  }
  const double scale = h / 3.0;
  for (double& v : theta) v *= scale;
  return theta;
}

}  // namespace fsgd
