#pragma once

#include <string>

#include "fgg/ast.hpp"

namespace fgg {

std::string print_type(const Type& t);
std::string print_formal(const TypeFormal& f);
std::string print_signature(const std::string& name, const Signature& sig);
// Single-line rendering; if/seq/panic in expression position become `{ ... }` blocks.
std::string print_expr(const Expr& e);
std::string print_expr(const ExprPtr& e);
std::string print_decl(const Decl& d);
std::string pretty_print(const Program& p);

const char* binary_op_text(BinaryOp op);

}  // namespace fgg
