// Step-size and truncation schedules: pure rules i -> (gamma_i, J_i).

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fsgd {

enum class ScheduleKind { FixedP, ThreeStage, Polynomial, Constant, Custom };

struct StepParams {
  double gamma = 0.0;
  long truncation = 0;  // J_i
};

namespace detail {
// floor/ceil with a 1e-9 guard so powers that mathematically land on an
// integer (e.g. 1e5^0.2 = 10) are not pushed off by libm rounding.
long guarded_floor(double v);
long guarded_ceil(double v);
}  // namespace detail

class Schedule {
 public:
  // gamma_i = A/i, J_i = floor(B i^{1/(2s+1)}). `p` only feeds validation.
  static Schedule fixed_p(double A, double B, double s, int p = 1);

  // Three training stages:
  //   i <= p/B:                   gamma = J = 0
  //   p/B < i <= p^{1+1/(2s)}:    gamma = A1/i, J = ceil(B i / p)
  //   otherwise:                  gamma = A2/i, J = ceil(B i^{1/(2s+1)})
  // Stages are tested in that order; the first match wins, which keeps the
  // no-update phase intact even when the ranges overlap.
  static Schedule three_stage(int p, double A1, double A2, double B, double s);

  // gamma_i = A i^{-(4s+1)/(6s+1)}, J_i = ceil(i^{1/(6s+1)}).
  static Schedule polynomial(double A, double s);

  static Schedule constant(double gamma, long truncation);
  static Schedule custom(std::function<StepParams(long)> rule);

  StepParams at(long i) const;

  ScheduleKind kind() const noexcept { return kind_; }
  double A() const noexcept { return A_; }
  double A1() const noexcept { return A1_; }
  double A2() const noexcept { return A2_; }
  double B() const noexcept { return B_; }
  double s() const noexcept { return s_; }
  int p() const noexcept { return p_; }

 private:
  Schedule() = default;

  ScheduleKind kind_ = ScheduleKind::Constant;
  double A_ = 0.0, A1_ = 0.0, A2_ = 0.0, B_ = 0.0, s_ = 0.0;
  int p_ = 1;
  double stage1_end_ = 0.0, stage2_end_ = 0.0;
  StepParams constant_{};
  std::function<StepParams(long)> rule_;
};

// Checks the stability and rate conditions behind each schedule against the
// assumed density bounds C1 <= p_X <= C2 and basis bound M. Violations come
// back as human-readable warnings and never block execution.
std::vector<std::string> validate_schedule(const Schedule& schedule, double C1, double C2,
                                           double M, long n);

}  // namespace fsgd
