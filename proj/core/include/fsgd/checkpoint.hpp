// Versioned text checkpoints for model state.
//
// Format (one record per file):
//   fsgd-ckpt v1
//   basis trig
//   p <dim>
//   include_intercept <0|1>
//   step <count>
//   alpha <value>
//   beta <k> <value> <value> ...      (one line per coordinate, k = 1..p)
//
// Values are printed with 17 significant digits so the round trip is
// value-exact for every finite double.

#pragma once

#include <iosfwd>
#include <string>

#include "fsgd/model.hpp"

namespace fsgd {

void save_checkpoint(const ModelState& state, std::ostream& out);
void save_checkpoint_file(const ModelState& state, const std::string& path);

ModelState load_checkpoint(std::istream& in);
ModelState load_checkpoint_file(const std::string& path);

}  // namespace fsgd
