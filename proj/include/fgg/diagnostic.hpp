#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fgg/ast.hpp"

namespace fgg {

struct Diagnostic {
  std::string message;
  int line = 1;
  int column = 1;
  std::string severity = "error";
};

std::string format_diagnostic(const std::string& file, const Diagnostic& d);

// Thrown internally by the parser and checkers; converted to Diagnostic at API boundaries.
class CompileError : public std::runtime_error {
 public:
  CompileError(SourcePos pos, const std::string& msg) : std::runtime_error(msg), pos_(pos) {}
  SourcePos pos() const { return pos_; }
  Diagnostic diagnostic() const {
    return Diagnostic{what(), pos_.line > 0 ? pos_.line : 1, pos_.column > 0 ? pos_.column : 1};
  }

 private:
  SourcePos pos_;
};

}  // namespace fgg
