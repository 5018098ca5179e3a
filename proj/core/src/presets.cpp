#include "fsgd/presets.hpp"

namespace fsgd {
namespace {

Scenario univariate_small_noise() {
  Scenario s;
  s.p = 1;
  s.dgp = Dgp::UniformCube;
  s.target = TargetFn::Bernoulli4Univariate;
  s.noise_halfwidth = 0.02;
  s.n = 100000;
  s.reps = 20;
  return s;
}

Scenario univariate_partial_support() {
  Scenario s;
  s.p = 1;
  s.dgp = Dgp::UniformInterval;
  s.lo = 0.25;
  s.hi = 0.75;
  s.target = TargetFn::Bernoulli4Univariate;
  s.noise_halfwidth = 0.2;
  s.n = 100000;
  s.reps = 20;
  return s;
}

Scenario additive_cube(int p) {
  Scenario s;
  s.p = p;
  s.dgp = Dgp::UniformCube;
  s.target = TargetFn::Bernoulli4Additive;
  s.noise_halfwidth = 0.02;
  s.n = 100000;
  s.reps = 20;
  return s;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> presets;

  {
    Preset p;
    p.name = "fig1a-p5";
    p.note = "additive model, p=5, uniform cube, fixed-p schedule A=1 B=0.5 s=2";
    p.scenario = additive_cube(5);
    p.estimator.kind = EstimatorKind::Fsgd;
    p.estimator.schedule = Schedule::fixed_p(1.0, 0.5, 2.0, 5);
    presets.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig2";
    p.note = "additive model, p=30, three-stage schedule A1=1 A2=5 B=0.5 s=2";
    p.scenario = additive_cube(30);
    p.estimator.kind = EstimatorKind::Fsgd;
    p.estimator.schedule = Schedule::three_stage(30, 1.0, 5.0, 0.5, 2.0);
    presets.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig3a";
    p.note = "univariate B4, X ~ U[0,1], noise 0.02, gamma=3/i, J=floor(i^0.2)";
    p.scenario = univariate_small_noise();
    p.estimator.kind = EstimatorKind::Fsgd;
    p.estimator.schedule = Schedule::fixed_p(3.0, 1.0, 2.0, 1);
    presets.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig3b";
    p.note = "univariate B4, X ~ U[0.25,0.75], noise 0.2, gamma=3/i, J=floor(0.8 i^0.2)";
    p.scenario = univariate_partial_support();
    p.estimator.kind = EstimatorKind::Fsgd;
    p.estimator.schedule = Schedule::fixed_p(3.0, 0.8, 2.0, 1);
    presets.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig4a";
    p.note = "adaptive smoothness on the fig3a scenario, grid [0.5,8], A=B=3";
    p.scenario = univariate_small_noise();
    p.scenario.reps = 20;
    p.estimator.kind = EstimatorKind::Lepski;
    p.estimator.lepski = {0.5, 8.0, 3.0, 3.0};
    presets.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig4b";
    p.note = "adaptive smoothness on the fig3b scenario, grid [0.5,8], A=4, B=2";
    p.scenario = univariate_partial_support();
    p.estimator.kind = EstimatorKind::Lepski;
    p.estimator.lepski = {0.5, 8.0, 4.0, 2.0};
    presets.push_back(std::move(p));
  }
  return presets;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

}  // namespace

std::optional<Preset> find_preset(std::string_view name) {
  for (const Preset& preset : presets()) {
    if (preset.name == name) return preset;
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& preset : presets()) names.push_back(preset.name);
  return names;
}

EstimatorConfig sieve_defaults(const Scenario& scenario) {
  EstimatorConfig config;
  config.kind = EstimatorKind::Sieve;
  // J_i = floor(i^0.21) expressed through the fixed-p rule: the truncation
  // exponent 1/(2s+1) equals 0.21 at s = (1/0.21 - 1)/2.
  const double s_for_exponent = (1.0 / 0.21 - 1.0) / 2.0;
  config.schedule = Schedule::fixed_p(3.0, 1.0, s_for_exponent, scenario.p);
  config.sieve_omega = 2.0;
  return config;
}

}  // namespace fsgd
