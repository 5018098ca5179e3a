#include "fsgd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsgd/errors.hpp"

namespace fsgd {
namespace detail {

namespace {
constexpr double kSnap = 1e-9;
}

long guarded_floor(double v) {
  const long f = static_cast<long>(std::floor(v + kSnap));
  return f < 0 ? 0 : f;
}

long guarded_ceil(double v) {
  const long c = static_cast<long>(std::ceil(v - kSnap));
  return c < 0 ? 0 : c;
}

}  // namespace detail

Schedule Schedule::fixed_p(double A, double B, double s, int p) {
  if (!(A > 0.0) || !(B > 0.0) || !(s > 0.0) || p < 1) {
    throw DomainError("fixed_p schedule requires A, B, s > 0 and p >= 1");
  }
  Schedule out;
  out.kind_ = ScheduleKind::FixedP;
  out.A_ = A;
  out.B_ = B;
  out.s_ = s;
  out.p_ = p;
  return out;
}

Schedule Schedule::three_stage(int p, double A1, double A2, double B, double s) {
  if (!(A1 > 0.0) || !(A2 > 0.0) || !(B > 0.0) || !(s > 0.0) || p < 1) {
    throw DomainError("three_stage schedule requires positive parameters");
  }
  Schedule out;
  out.kind_ = ScheduleKind::ThreeStage;
  out.A1_ = A1;
  out.A2_ = A2;
  out.B_ = B;
  out.s_ = s;
  out.p_ = p;
  out.stage1_end_ = static_cast<double>(p) / B;
  out.stage2_end_ = std::pow(static_cast<double>(p), 1.0 + 1.0 / (2.0 * s));
  return out;
}

Schedule Schedule::polynomial(double A, double s) {
  if (!(A > 0.0) || !(s > 0.0)) {
    throw DomainError("polynomial schedule requires A, s > 0");
  }
  Schedule out;
  out.kind_ = ScheduleKind::Polynomial;
  out.A_ = A;
  out.s_ = s;
  return out;
}

Schedule Schedule::constant(double gamma, long truncation) {
  if (!(gamma >= 0.0) || truncation < 0) {
    throw DomainError("constant schedule requires gamma >= 0 and J >= 0");
  }
  Schedule out;
  out.kind_ = ScheduleKind::Constant;
  out.constant_ = {gamma, truncation};
  return out;
}

Schedule Schedule::custom(std::function<StepParams(long)> rule) {
  Schedule out;
  out.kind_ = ScheduleKind::Custom;
  out.rule_ = std::move(rule);
  return out;
}

StepParams Schedule::at(long i) const {
  if (i < 1) throw DomainError("schedule index must be >= 1");
  const double di = static_cast<double>(i);
  switch (kind_) {
    case ScheduleKind::FixedP:
      return {A_ / di, detail::guarded_floor(B_ * std::pow(di, 1.0 / (2.0 * s_ + 1.0)))};
    case ScheduleKind::ThreeStage:
      if (di <= stage1_end_) return {0.0, 0};
      if (di <= stage2_end_) {
        return {A1_ / di, detail::guarded_ceil(B_ * di / static_cast<double>(p_))};
      }
      return {A2_ / di, detail::guarded_ceil(B_ * std::pow(di, 1.0 / (2.0 * s_ + 1.0)))};
    case ScheduleKind::Polynomial:
      return {A_ / std::pow(di, (4.0 * s_ + 1.0) / (6.0 * s_ + 1.0)),
              detail::guarded_ceil(std::pow(di, 1.0 / (6.0 * s_ + 1.0)))};
    case ScheduleKind::Constant:
      return constant_;
    case ScheduleKind::Custom:
      return rule_(i);
  }
  throw DomainError("unknown schedule kind");
}

std::vector<std::string> validate_schedule(const Schedule& schedule, double C1, double C2,
                                           double M, long n) {
  std::vector<std::string> warnings;
  const auto warn = [&warnings](const auto&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    warnings.push_back(os.str());
  };
  const double M2 = M * M;
  const double s = schedule.s();
  switch (schedule.kind()) {
    case ScheduleKind::FixedP: {
      const double A = schedule.A();
      const double b_bound = 1.0 / (2.0 * schedule.p() * C2 * M2 * A * A);
      if (A < 2.0 / C1) {
        warn("fixed_p: A = ", A, " below the bound 2/C1 = ", 2.0 / C1);
      }
      if (schedule.B() > b_bound) {
        warn("fixed_p: B = ", schedule.B(), " exceeds 1/(2 p C2 M^2 A^2) = ", b_bound);
      }
      break;
    }
    case ScheduleKind::ThreeStage: {
      const double A1 = schedule.A1();
      const double A2 = schedule.A2();
      const double expected_A1 = (2.0 * s + 1.0) * A2;
      if (std::abs(A1 - expected_A1) > 1e-12 * std::max(1.0, std::abs(expected_A1))) {
        warn("three_stage: A1 = ", A1, " differs from (2s+1) A2 = ", expected_A1);
      }
      if (A2 < 2.0 / C1) {
        warn("three_stage: A2 = ", A2, " below the bound 2/C1 = ", 2.0 / C1);
      }
      const double b_bound = 1.0 / (4.0 * C2 * M2 * A2 * A2);
      if (schedule.B() > b_bound) {
        warn("three_stage: B = ", schedule.B(), " exceeds 1/(4 C2 M^2 A2^2) = ", b_bound);
      }
      const double p_bound = std::pow(schedule.B(), -2.0 * s);
      if (schedule.p() < p_bound) {
        warn("three_stage: p = ", schedule.p(), " below 1/B^(2s) = ", p_bound);
      }
      const double n_bound = std::pow(static_cast<double>(schedule.p()), 1.0 + 1.0 / (2.0 * s));
      if (n > 0 && static_cast<double>(n) < n_bound) {
        warn("three_stage: n = ", n, " below p^(1+1/(2s)) = ", n_bound);
      }
      break;
    }
    case ScheduleKind::Polynomial:
      if (!(s > 0.5)) {
        warn("polynomial: s = ", s, " violates the hypothesis s > 1/2");
      }
      break;
    case ScheduleKind::Constant:
    case ScheduleKind::Custom:
      break;
  }
  return warnings;
}

}  // namespace fsgd
