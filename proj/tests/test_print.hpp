#pragma once

#include <ostream>

#include "asymgen/expr.hpp"

namespace asymgen {

// Readable gtest failure output.
inline void PrintTo(const Expr& e, std::ostream* os) { *os << render_infix(e); }

}  // namespace asymgen
