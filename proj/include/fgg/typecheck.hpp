#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fgg/ast.hpp"
#include "fgg/diagnostic.hpp"

namespace fgg {

// Δ: type parameter -> bound, in declaration order.
using TypeEnv = std::vector<FormalEntry>;
// Γ: variable -> type.
using VarEnv = std::vector<std::pair<std::string, Type>>;
using MethodSet = std::vector<MethodSpec>;
using TypeSubst = std::map<std::string, Type>;

// Type of `panic`; a subtype of everything.
const Type& bottom_type();
bool is_bottom(const Type& t);

Type substitute(const Type& t, const TypeSubst& s);
// Capture-avoiding: the signature's own formal shadows and is renamed away from the range of s.
Signature substitute(const Signature& sig, const TypeSubst& s);
// Equality up to renaming of the signature's own type formal; parameter names are ignored.
bool same_signature(const Signature& a, const Signature& b);
TypeSubst make_subst(const TypeFormal& formal, const std::vector<Type>& actuals);

class Checker {
 public:
  explicit Checker(const Program& program);

  const Program& program() const { return program_; }

  const StructDecl* find_struct(const std::string& name) const;
  const InterfaceDecl* find_interface(const std::string& name) const;
  const MethodDecl* find_method(const std::string& type, const std::string& method) const;
  const std::vector<const MethodDecl*>& methods_on(const std::string& type) const;
  const TypeFormal* formal_of(const std::string& name) const;

  bool is_struct(const Type& t) const;
  bool is_interface(const Type& t) const;
  // Parameters and interfaces: anything that may hold a value of several struct types.
  bool is_interface_like(const Type& t) const { return t.is_param || is_interface(t); }

  bool subtype(const Type& a, const Type& b, const TypeEnv& delta) const;
  MethodSet methods(const Type& t, const TypeEnv& delta) const;
  std::optional<MethodSpec> method(const Type& t, const std::string& m, const TypeEnv& delta) const;
  // Field list of a struct type with actuals substituted.
  std::vector<Field> fields(const Type& t) const;
  // bounds_Δ(α) = Δ(α); bounds_Δ(τ) = τ otherwise.
  Type bounds(const Type& t, const TypeEnv& delta) const;

  // Receiver formal of a method: the struct's formal renamed to the receiver's parameter names.
  TypeFormal receiver_formal(const MethodDecl& m) const;

  void check_wellformed(const Type& t, const TypeEnv& delta, SourcePos pos) const;
  // η = (Φ :=_Δ φ): arity, well-formedness and bounds. Throws on failure.
  TypeSubst check_actuals(const TypeFormal& formal, const std::vector<Type>& actuals,
                          const TypeEnv& delta, SourcePos pos, const std::string& rule) const;

  // Throws CompileError naming the failed rule.
  Type type_of(const Expr& e, const TypeEnv& delta, const VarEnv& gamma) const;
  // Check mode: e's type must subtype `expected`. Branches of if/seq are checked separately.
  void check(const Expr& e, const Type& expected, const TypeEnv& delta, const VarEnv& gamma,
             const std::string& rule) const;
  std::optional<Type> try_type_of(const Expr& e, const TypeEnv& delta, const VarEnv& gamma) const;

  // Closed terms only. Memoized by node identity; nodes are kept alive by the cache.
  std::optional<Type> closed_type(const ExprPtr& e) const;

  std::vector<Diagnostic> check_program() const;

 private:
  void check_formal(const TypeFormal& formal, const TypeEnv& outer, SourcePos pos) const;
  void check_signature(const Signature& sig, const TypeEnv& delta, SourcePos pos) const;
  void check_decl(const Decl& d) const;

  const Program& program_;
  StructDecl int_decl_;
  StructDecl bool_decl_;
  std::unordered_map<std::string, const StructDecl*> structs_;
  std::unordered_map<std::string, const InterfaceDecl*> interfaces_;
  std::unordered_map<std::string, std::vector<const MethodDecl*>> methods_;
  std::vector<Diagnostic> table_errors_;

  mutable std::set<std::pair<std::string, std::string>> in_progress_;
  mutable std::unordered_map<const Expr*, std::optional<Type>> closed_cache_;
  mutable std::vector<ExprPtr> keep_alive_;
};

std::vector<Diagnostic> typecheck_program(const Program& p);
std::vector<Diagnostic> fgg_typecheck_program(const Program& p);
std::vector<Diagnostic> fg_typecheck_program(const Program& p, Dialect dialect);

}  // namespace fgg
