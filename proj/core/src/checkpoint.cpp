#include "fsgd/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fsgd/errors.hpp"

namespace fsgd {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, long line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ParseError("checkpoint: bad numeric token '" + token + "'", line);
  }
  return v;
}

std::string expect_line(std::istream& in, long& line) {
  std::string text;
  if (!std::getline(in, text)) {
    throw ParseError("checkpoint: truncated file", line);
  }
  ++line;
  return text;
}

}  // namespace

void save_checkpoint(const ModelState& state, std::ostream& out) {
  out << "fsgd-ckpt v1\n";
  out << "basis " << state.basis().name() << "\n";
  out << "p " << state.dim() << "\n";
  out << "include_intercept " << (state.has_intercept() ? 1 : 0) << "\n";
  out << "step " << state.steps() << "\n";
  out << "alpha " << format_double(state.intercept()) << "\n";
  const auto& beta = state.coefficients();
  for (int k = 0; k < state.dim(); ++k) {
    out << "beta " << (k + 1);
    for (double v : beta[static_cast<std::size_t>(k)]) {
      out << ' ' << format_double(v);
    }
    out << "\n";
  }
}

void save_checkpoint_file(const ModelState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open checkpoint for writing: " + path);
  save_checkpoint(state, out);
  if (!out) throw ParseError("failed writing checkpoint: " + path);
}

ModelState load_checkpoint(std::istream& in) {
  long line = 0;

  if (expect_line(in, line) != "fsgd-ckpt v1") {
    throw ParseError("checkpoint: unsupported header or version (want 'fsgd-ckpt v1')", 1);
  }

  const auto key_value = [&](const std::string& key) {
    const std::string text = expect_line(in, line);
    if (text.rfind(key + " ", 0) != 0) {
      throw ParseError("checkpoint: expected '" + key + "' line", line);
    }
    return text.substr(key.size() + 1);
  };

  const BasisFamily basis = BasisFamily::from_name(key_value("basis"));
  const int dim = static_cast<int>(std::strtol(key_value("p").c_str(), nullptr, 10));
  if (dim < 1) throw ParseError("checkpoint: p must be >= 1", line);
  const std::string intercept_token = key_value("include_intercept");
  if (intercept_token != "0" && intercept_token != "1") {
    throw ParseError("checkpoint: include_intercept must be 0 or 1", line);
  }
  const long steps = std::strtol(key_value("step").c_str(), nullptr, 10);
  if (steps < 0) throw ParseError("checkpoint: step must be >= 0", line);
  const double alpha = parse_double(key_value("alpha"), line);
  if (intercept_token == "0" && alpha != 0.0) {
    throw ParseError("checkpoint: alpha must be 0 when the intercept is disabled", line);
  }

  std::vector<std::vector<double>> beta(static_cast<std::size_t>(dim));
  std::size_t width = 0;
  for (int k = 1; k <= dim; ++k) {
    std::istringstream row(expect_line(in, line));
    std::string tag;
    int index = 0;
    if (!(row >> tag >> index) || tag != "beta" || index != k) {
      throw ParseError("checkpoint: expected 'beta " + std::to_string(k) + "' line", line);
    }
    std::string token;
    auto& coeffs = beta[static_cast<std::size_t>(k - 1)];
    while (row >> token) coeffs.push_back(parse_double(token, line));
    width = std::max(width, coeffs.size());
  }
  for (auto& coeffs : beta) coeffs.resize(width, 0.0);

  std::string trailing;
  if (std::getline(in, trailing) && !trailing.empty()) {
    throw ParseError("checkpoint: unexpected trailing content", line + 1);
  }

  ModelState state(basis, dim, intercept_token == "1");
  state.set_intercept(alpha);
  state.set_steps(steps);
  state.set_coefficients(std::move(beta));
  return state;
}

ModelState load_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace fsgd
