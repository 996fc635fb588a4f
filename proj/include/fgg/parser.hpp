#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fgg/ast.hpp"
#include "fgg/diagnostic.hpp"

namespace fgg {

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return program.has_value(); }
};

ParseResult parse_program(std::string_view source, Dialect dialect);
ParseResult parse_fgg(std::string_view source);
// `extended` selects FG-extended (if, !=, panic, sequencing, arithmetic).
ParseResult parse_fg(std::string_view source, bool extended);

}  // namespace fgg
