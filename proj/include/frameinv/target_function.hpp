#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "frameinv/errors.hpp"

namespace frameinv {

/// Real-valued function on [-1, 1] to be reconstructed.
struct TargetFunction {
  std::string name;
  std::function<double(double)> evaluator;
  std::string smoothness_note;

  double operator()(double x) const { return evaluator(x); }
};

inline const std::vector<std::string>& test_function_names() {
  static const std::vector<std::string> names{"gaussian", "cospoly", "bump6"};
  return names;
}

inline TargetFunction test_function(std::string_view name) {
  if (name == "gaussian")
    return {"gaussian", [](double x) { return std::exp(-x * x); },
            "analytic; periodic extension has a derivative jump at x = +-1"};
  if (name == "cospoly")
    return {"cospoly",
            [](double x) {
              const double c = std::cos(std::numbers::pi * x);
              const double s = std::sin(x);
              return c * c * c * (s * s + 1.0);
            },
            "analytic; periodic extension has a derivative jump at x = +-1"};
  if (name == "bump6")
    return {"bump6",
            [](double x) {
              const double u = 1.0 - x * x;
              return u * u * u;
            },
            "polynomial; periodic extension is C^2 with a third-derivative jump"};
  std::string valid;
  for (const auto& n : test_function_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw DomainError("unknown test function '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace frameinv
