// Named experiment presets so the reference runs are one command each.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsgd/simlab.hpp"

namespace fsgd {

struct Preset {
  std::string name;
  std::string note;
  Scenario scenario;
  EstimatorConfig estimator;  // the default (F-SGD or Lepski) configuration
};

std::optional<Preset> find_preset(std::string_view name);
std::vector<std::string> preset_names();

// Sieve baseline defaults for a scenario: gamma_i = 3/i, J_i = floor(i^0.21),
// t_j = j^(-2s) with s = 2.
EstimatorConfig sieve_defaults(const Scenario& scenario);

}  // namespace fsgd
