#pragma once

#include <vector>

#include "fgg/ast.hpp"
#include "fgg/diagnostic.hpp"

namespace fgg {

struct ErasureTranslation {
  Program program;
  std::vector<Diagnostic> warnings;
};

// Homogeneous erasure: type parameters, field types, parameter and result types all
// become Any; uses at a known type get an assertion. Type assertions are kept but
// lose their type arguments, so assertion behaviour is not preserved (a warning is
// emitted). Throws CompileError when the program declares a conflicting Any.
ErasureTranslation erase_program(const Program& p);

// Erasure of a closed value: drops type arguments.
ExprPtr erase_value(const ExprPtr& v);

}  // namespace fgg
