#pragma once

#include <cstdint>
#include <vector>

#include "dde/term.hpp"

namespace dde {

/// One row of a utility table. Variables in `pattern` act as wildcards.
struct UtilityRule {
  Term pattern;
  double value = 0;
};

/// μ : Fluent × Moment → ℝ as an ordered pattern table; the first matching
/// row wins, otherwise the default applies.
class UtilityFunction {
 public:
  UtilityFunction() = default;
  UtilityFunction(std::vector<UtilityRule> rules, double fallback) : rules_(std::move(rules)), default_(fallback) {}

  double operator()(const Term& fluent, std::int64_t time) const;

  const std::vector<UtilityRule>& rules() const { return rules_; }
  double default_value() const { return default_; }

 private:
  std::vector<UtilityRule> rules_;
  double default_ = 0;
};

}  // namespace dde
