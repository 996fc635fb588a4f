#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgg/ast.hpp"
#include "fgg/typecheck.hpp"

namespace fgg {

// η: type parameter -> expression denoting its dictionary.
using DictEnv = std::map<std::string, ExprPtr>;
// ζ: type parameter -> expression denoting its type-rep.
using MetaEnv = std::map<std::string, ExprPtr>;

struct NameMangler {
  static std::string dict_name(const std::string& t) { return t + "Dict"; }
  static std::string meta_name(const std::string& t);
  static std::string spec_name(const std::string& m) { return "spec_" + m; }
  static std::string method_ptr_name(const std::string& t, const std::string& m);
  static std::string func_name(std::size_t n) { return "Func_" + std::to_string(n); }
  static std::string fn_meta_name(std::size_t n) { return "spec_metadata_" + std::to_string(n); }
  static std::string param_index_name(std::size_t i) { return "param_index_" + std::to_string(i); }
  static std::string dict_field(std::size_t i) { return "dict_" + std::to_string(i); }
  static std::string type_field(std::size_t i) { return "_type_" + std::to_string(i); }
  static constexpr const char* type_rep_field = "_type";
  static constexpr const char* type_mdata = "_type_mdata";
  static constexpr const char* any = "Any";
  static constexpr const char* try_cast = "tryCast";
  static constexpr const char* apply = "Apply";

  // Source identifiers must not start with any of these.
  static const std::vector<std::string>& reserved_prefixes();
};

struct DictOptions {
  bool skip_redundant_asserts = false;
  bool no_type_metadata = false;
};

struct InventoryEntry {
  std::string name;
  std::string kind;  // struct | interface | method
  std::string role;
  std::string source;  // originating source declaration, empty for program-level families
};

struct DictTranslation {
  Program program;
  std::set<std::string> dict_structs;
  std::set<std::string> method_ptr_structs;
  std::set<std::string> meta_structs;
  std::vector<InventoryEntry> inventory;
};

nlohmann::json inventory_json(const std::vector<InventoryEntry>& inv);

std::size_t arity(const Signature& sig);
std::size_t max_formal(const Decl& d);

// Dictionary-passing translation from FGG to FG-extended. The source program must
// typecheck and outlive the translator.
class DictTranslator {
 public:
  explicit DictTranslator(const Program& source, DictOptions opts = {});

  // Throws CompileError on identifier collisions.
  void check_collisions() const;

  DictTranslation translate_program();

  ExprPtr translate_expr(const ExprPtr& e, const TypeEnv& delta, const DictEnv& eta,
                         const VarEnv& gamma);
  // Translation of a closed runtime term (empty environments).
  ExprPtr translate_closed(const ExprPtr& e) { return translate_expr(e, {}, {}, {}); }

  ExprPtr make_dict(const Type& tau, const Type& bound, const TypeEnv& delta, const DictEnv& eta);
  ExprPtr typemeta(const Type& tau, const MetaEnv& zeta);
  ExprPtr signature_meta(const Signature& sig, const MetaEnv& zeta);
  MethodSpec spec_mdata(const MethodSpec& spec) const;
  std::vector<Decl> meth_ptr(const std::string& t, const MethodSpec& spec) const;
  std::vector<Decl> translate_interface(const InterfaceDecl& d);
  std::vector<Decl> translate_struct(const StructDecl& d);
  std::vector<Decl> translate_method(const MethodDecl& d);

  const Checker& checker() const { return checker_; }
  const std::set<std::string>& dict_structs() const { return dict_structs_; }
  const std::set<std::string>& method_ptr_structs() const { return method_ptr_structs_; }
  const std::set<std::string>& meta_structs() const { return meta_structs_; }

 private:
  struct Translated {
    ExprPtr expr;
    std::string fg_type;  // exact FG type when statically evident, else empty
  };
  Translated tr(const ExprPtr& e, const TypeEnv& delta, const DictEnv& eta, const VarEnv& gamma);
  Type static_type(const ExprPtr& e, const TypeEnv& delta, const VarEnv& gamma) const;
  ExprPtr coerce(const Translated& t, const std::string& type);
  std::vector<Param> as_param(const TypeFormal& formal) const;
  MetaEnv meta_of(const DictEnv& eta) const;
  void note(const std::string& name, const char* kind, const char* role, const std::string& source);

  const Program& src_;
  Checker checker_;
  DictOptions opts_;
  std::set<std::string> used_builtin_metas_;
  std::set<std::string> dict_structs_;
  std::set<std::string> method_ptr_structs_;
  std::set<std::string> meta_structs_;
  std::vector<InventoryEntry> inventory_;
  std::string recv_name_;
  std::string recv_type_;
};

DictTranslation translate_program(const Program& source, const DictOptions& opts = {});

}  // namespace fgg
