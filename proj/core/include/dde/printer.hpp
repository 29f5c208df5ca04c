#pragma once

#include <string>

#include "dde/formula.hpp"

namespace dde {

/// Canonical single-line prefix rendering, e.g.
/// `(K I now (forall ((t Moment)) (not (holds (dead P1) t))))`.
/// Quantifiers are printed one binder per node.
std::string print_formula(const Formula& f);

}  // namespace dde
