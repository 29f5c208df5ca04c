#include "dde/utility.hpp"

namespace dde {

double UtilityFunction::operator()(const Term& fluent, std::int64_t /*time*/) const {
  for (const auto& rule : rules_) {
    Substitution s;
    if (match(rule.pattern, fluent, s)) return rule.value;
  }
  return default_;
}

}  // namespace dde
