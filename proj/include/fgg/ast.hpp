#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fgg {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// FG types are the special case with no args and is_param == false.
// Whether a name is a struct or an interface is decided by its declaration.
struct Type {
  std::string name;
  std::vector<Type> args;
  bool is_param = false;

  static Type param(std::string name);
  static Type named(std::string name, std::vector<Type> args = {});

  friend bool operator==(const Type&, const Type&) = default;
};

// Which pass produced a node. Only translator output carries non-source
// tags; the correspondence checker uses them to classify redexes.
enum class Origin : std::uint8_t { source, erase, sim, dict };

enum class BinaryOp : std::uint8_t { lt, gt, add, sub, neq };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ex {
struct Var {
  std::string name;
};
struct Call {
  ExprPtr receiver;
  std::string method;
  std::vector<Type> type_args;
  std::vector<ExprPtr> args;
};
struct StructLit {
  Type type;
  std::vector<ExprPtr> fields;
};
struct Select {
  ExprPtr receiver;
  std::string field;
};
struct Assert {
  ExprPtr operand;
  Type type;
};
struct IntLit {
  std::int64_t value;
};
struct BoolLit {
  bool value;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct If {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;
  // Declared result type of the method body this if was inlined from. Branch types need
  // not have a join, so a runtime if keeps it. Not part of equality.
  std::optional<Type> result = std::nullopt;
};
struct Seq {
  ExprPtr first;
  ExprPtr rest;
};
struct Panic {};
}  // namespace ex

struct Expr {
  using Node = std::variant<ex::Var, ex::Call, ex::StructLit, ex::Select, ex::Assert, ex::IntLit,
                            ex::BoolLit, ex::Binary, ex::If, ex::Seq, ex::Panic>;
  Node node;
  SourcePos pos;
  Origin origin = Origin::source;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

ExprPtr make_expr(Expr::Node node, SourcePos pos = {}, Origin origin = Origin::source);
// Same node, different origin tag.
ExprPtr with_origin(const ExprPtr& e, Origin origin);

ExprPtr var(std::string name, SourcePos pos = {});
ExprPtr call(ExprPtr recv, std::string method, std::vector<Type> targs, std::vector<ExprPtr> args,
             Origin origin = Origin::source);
ExprPtr lit(Type type, std::vector<ExprPtr> fields, Origin origin = Origin::source);
ExprPtr select(ExprPtr recv, std::string field, Origin origin = Origin::source);
ExprPtr assert_to(ExprPtr e, Type type, Origin origin = Origin::source);
ExprPtr int_lit(std::int64_t v);
ExprPtr bool_lit(bool v);
ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r, Origin origin = Origin::source);
ExprPtr if_else(ExprPtr c, ExprPtr t, ExprPtr e, Origin origin = Origin::source);
ExprPtr seq(ExprPtr a, ExprPtr b, Origin origin = Origin::source);
ExprPtr panic_expr(Origin origin = Origin::source);

// Structural equality; positions and origin tags are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

// v ::= t{v...} | int | bool
bool is_value(const Expr& e);
// Only valid on values.
Type value_type(const Expr& v);

struct FormalEntry {
  std::string name;
  Type bound;
  friend bool operator==(const FormalEntry&, const FormalEntry&) = default;
};
using TypeFormal = std::vector<FormalEntry>;

struct Field {
  std::string name;
  Type type;
  friend bool operator==(const Field&, const Field&) = default;
};
using Param = Field;

struct Signature {
  TypeFormal formal;
  std::vector<Param> params;
  Type result;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct MethodSpec {
  std::string name;
  Signature sig;
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

struct StructDecl {
  std::string name;
  TypeFormal formal;
  std::vector<Field> fields;
  SourcePos pos;
};

struct InterfaceDecl {
  std::string name;
  TypeFormal formal;
  std::vector<MethodSpec> specs;
  SourcePos pos;
};

struct MethodDecl {
  std::string receiver;
  std::string receiver_type;
  std::vector<std::string> receiver_params;
  std::string name;
  Signature sig;
  ExprPtr body;
  SourcePos pos;
};

using Decl = std::variant<StructDecl, InterfaceDecl, MethodDecl>;

enum class Dialect { fg, fg_extended, fgg };

struct Program {
  Dialect dialect = Dialect::fgg;
  std::vector<Decl> decls;
  ExprPtr main;
  SourcePos main_pos;
};

bool equal(const Decl& a, const Decl& b);
bool equal(const Program& a, const Program& b);

std::size_t node_count(const Type& t);
std::size_t node_count(const Expr& e);
std::size_t node_count(const Decl& d);
std::size_t node_count(const Program& p);

const std::string& decl_name(const Decl& d);
SourcePos decl_pos(const Decl& d);

}  // namespace fgg

namespace fgg {

// All direct subexpressions in left-to-right order.
std::vector<ExprPtr> children(const Expr& e);
// Copy of e (same pos/origin) with its children replaced.
ExprPtr with_children(const Expr& e, std::vector<ExprPtr> kids);
// Number of leading children evaluated left to right before e itself contracts.
std::size_t strict_arity(const Expr& e);
// True if e contains if, sequencing, panic or an operator other than `<`.
bool uses_extended_forms(const Expr& e);

}  // namespace fgg
