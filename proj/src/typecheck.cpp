#include "fgg/typecheck.hpp"

#include <algorithm>

#include "fgg/printer.hpp"

namespace fgg {

const Type& bottom_type() {
  static const Type t = Type::named("⊥");
  return t;
}
bool is_bottom(const Type& t) { return !t.is_param && t.name == "⊥" && t.args.empty(); }

Type substitute(const Type& t, const TypeSubst& s) {
  if (t.is_param) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (t.args.empty()) return t;
  Type out = Type::named(t.name);
  out.args.reserve(t.args.size());
  for (auto& a : t.args) out.args.push_back(substitute(a, s));
  return out;
}

namespace {

void free_params(const Type& t, std::set<std::string>& out) {
  if (t.is_param) out.insert(t.name);
  for (auto& a : t.args) free_params(a, out);
}

Signature apply_all(const Signature& sig, const TypeSubst& s) {
  Signature out = sig;
  for (auto& f : out.formal) f.bound = substitute(f.bound, s);
  for (auto& p : out.params) p.type = substitute(p.type, s);
  out.result = substitute(out.result, s);
  return out;
}

std::string show(const Type& t) { return print_type(t); }

}  // namespace

Signature substitute(const Signature& sig, const TypeSubst& s) {
  if (s.empty()) return sig;
  std::set<std::string> range;
  for (auto& [k, v] : s) free_params(v, range);
  TypeSubst inner = s;
  for (auto& f : sig.formal) inner.erase(f.name);
  TypeSubst rename;
  std::set<std::string> taken = range;
  for (auto& f : sig.formal) taken.insert(f.name);
  for (auto& [k, v] : s) taken.insert(k);
  for (auto& f : sig.formal) {
    if (!range.count(f.name)) continue;
    std::string fresh = f.name;
    do fresh += "'";
    while (taken.count(fresh));
    taken.insert(fresh);
    rename[f.name] = Type::param(fresh);
  }
  Signature out = sig;
  if (!rename.empty()) {
    out = apply_all(sig, rename);
    for (auto& f : out.formal)
      if (auto it = rename.find(f.name); it != rename.end()) f.name = it->second.name;
  }
  return apply_all(out, inner);
}

bool same_signature(const Signature& a, const Signature& b) {
  if (a.formal.size() != b.formal.size() || a.params.size() != b.params.size()) return false;
  TypeSubst ra, rb;
  for (std::size_t i = 0; i < a.formal.size(); ++i) {
    ra[a.formal[i].name] = Type::param("$" + std::to_string(i));
    rb[b.formal[i].name] = Type::param("$" + std::to_string(i));
  }
  for (std::size_t i = 0; i < a.formal.size(); ++i)
    if (substitute(a.formal[i].bound, ra) != substitute(b.formal[i].bound, rb)) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (substitute(a.params[i].type, ra) != substitute(b.params[i].type, rb)) return false;
  return substitute(a.result, ra) == substitute(b.result, rb);
}

TypeSubst make_subst(const TypeFormal& formal, const std::vector<Type>& actuals) {
  TypeSubst s;
  for (std::size_t i = 0; i < formal.size() && i < actuals.size(); ++i) s[formal[i].name] = actuals[i];
  return s;
}

Checker::Checker(const Program& program) : program_(program) {
  int_decl_.name = "int";
  bool_decl_.name = "bool";
  structs_["int"] = &int_decl_;
  structs_["bool"] = &bool_decl_;
  for (auto& d : program_.decls) {
    if (auto* s = std::get_if<StructDecl>(&d)) {
      if (structs_.count(s->name) || interfaces_.count(s->name))
        table_errors_.push_back(CompileError(s->pos, "t-prog: duplicate type declaration " + s->name).diagnostic());
      else
        structs_[s->name] = s;
    } else if (auto* i = std::get_if<InterfaceDecl>(&d)) {
      if (structs_.count(i->name) || interfaces_.count(i->name))
        table_errors_.push_back(CompileError(i->pos, "t-prog: duplicate type declaration " + i->name).diagnostic());
      else
        interfaces_[i->name] = i;
    } else {
      auto& m = std::get<MethodDecl>(d);
      auto& list = methods_[m.receiver_type];
      bool dup = std::any_of(list.begin(), list.end(),
                             [&](const MethodDecl* o) { return o->name == m.name; });
      if (dup)
        table_errors_.push_back(CompileError(m.pos, "t-prog: duplicate method declaration " +
                                                        m.receiver_type + "." + m.name).diagnostic());
      else
        list.push_back(&m);
    }
  }
}

const StructDecl* Checker::find_struct(const std::string& name) const {
  auto it = structs_.find(name);
  return it == structs_.end() ? nullptr : it->second;
}
const InterfaceDecl* Checker::find_interface(const std::string& name) const {
  auto it = interfaces_.find(name);
  return it == interfaces_.end() ? nullptr : it->second;
}
const MethodDecl* Checker::find_method(const std::string& type, const std::string& method) const {
  for (auto* m : methods_on(type))
    if (m->name == method) return m;
  return nullptr;
}
const std::vector<const MethodDecl*>& Checker::methods_on(const std::string& type) const {
  static const std::vector<const MethodDecl*> none;
  auto it = methods_.find(type);
  return it == methods_.end() ? none : it->second;
}
const TypeFormal* Checker::formal_of(const std::string& name) const {
  if (auto* s = find_struct(name)) return &s->formal;
  if (auto* i = find_interface(name)) return &i->formal;
  return nullptr;
}

bool Checker::is_struct(const Type& t) const { return !t.is_param && find_struct(t.name); }
bool Checker::is_interface(const Type& t) const { return !t.is_param && find_interface(t.name); }

Type Checker::bounds(const Type& t, const TypeEnv& delta) const {
  if (!t.is_param) return t;
  for (auto& e : delta)
    if (e.name == t.name) return e.bound;
  throw CompileError({}, "unbound type parameter " + t.name);
}

TypeFormal Checker::receiver_formal(const MethodDecl& m) const {
  const StructDecl* s = find_struct(m.receiver_type);
  if (!s) throw CompileError(m.pos, "t-func: receiver type " + m.receiver_type + " is not a struct type");
  if (s->formal.size() != m.receiver_params.size())
    throw CompileError(m.pos, "t-func: receiver " + m.receiver_type + " expects " +
                                  std::to_string(s->formal.size()) + " type parameters");
  TypeSubst ren;
  for (std::size_t i = 0; i < s->formal.size(); ++i)
    ren[s->formal[i].name] = Type::param(m.receiver_params[i]);
  TypeFormal out;
  for (std::size_t i = 0; i < s->formal.size(); ++i)
    out.push_back({m.receiver_params[i], substitute(s->formal[i].bound, ren)});
  return out;
}

MethodSet Checker::methods(const Type& t, const TypeEnv& delta) const {
  if (t.is_param) return methods(bounds(t, delta), delta);
  MethodSet out;
  auto add = [&](MethodSpec s) {
    for (auto& o : out)
      if (o.name == s.name) return;
    out.push_back(std::move(s));
  };
  if (auto* i = find_interface(t.name)) {
    if (i->formal.size() != t.args.size())
      throw CompileError({}, "wrong number of type arguments for " + t.name);
    TypeSubst eta = make_subst(i->formal, t.args);
    for (auto& s : i->specs) add({s.name, substitute(s.sig, eta)});
    return out;
  }
  if (auto* s = find_struct(t.name)) {
    if (s->formal.size() != t.args.size())
      throw CompileError({}, "wrong number of type arguments for " + t.name);
    check_actuals(s->formal, t.args, delta, {}, "methods");
    for (auto* m : methods_on(t.name)) {
      TypeSubst eta;
      for (std::size_t k = 0; k < m->receiver_params.size() && k < t.args.size(); ++k)
        eta[m->receiver_params[k]] = t.args[k];
      add({m->name, substitute(m->sig, eta)});
    }
    return out;
  }
  if (is_bottom(t)) return out;
  throw CompileError({}, "unknown type " + t.name);
}

std::optional<MethodSpec> Checker::method(const Type& t, const std::string& m,
                                          const TypeEnv& delta) const {
  for (auto& s : methods(t, delta))
    if (s.name == m) return s;
  return std::nullopt;
}

std::vector<Field> Checker::fields(const Type& t) const {
  const StructDecl* s = t.is_param ? nullptr : find_struct(t.name);
  if (!s) throw CompileError({}, show(t) + " is not a struct type");
  TypeSubst eta = make_subst(s->formal, t.args);
  std::vector<Field> out = s->fields;
  for (auto& f : out) f.type = substitute(f.type, eta);
  return out;
}

bool Checker::subtype(const Type& a, const Type& b, const TypeEnv& delta) const {
  if (is_bottom(a) || a == b) return true;
  if (b.is_param || is_bottom(b) || !is_interface(b)) return false;
  auto key = std::make_pair(show(a), show(b));
  if (in_progress_.count(key)) return true;
  in_progress_.insert(key);
  bool ok = true;
  try {
    MethodSet have = methods(a, delta);
    for (auto& want : methods(b, delta)) {
      auto it = std::find_if(have.begin(), have.end(),
                             [&](const MethodSpec& h) { return h.name == want.name; });
      if (it == have.end() || !same_signature(it->sig, want.sig)) {
        ok = false;
        break;
      }
    }
  } catch (const CompileError&) {
    ok = false;
  }
  in_progress_.erase(key);
  return ok;
}

void Checker::check_wellformed(const Type& t, const TypeEnv& delta, SourcePos pos) const {
  if (t.is_param) {
    for (auto& e : delta)
      if (e.name == t.name) return;
    throw CompileError(pos, "t-param: type parameter " + t.name + " not in scope");
  }
  const TypeFormal* f = formal_of(t.name);
  if (!f) throw CompileError(pos, "t-named: unknown type " + t.name);
  check_actuals(*f, t.args, delta, pos, "t-named");
}

TypeSubst Checker::check_actuals(const TypeFormal& formal, const std::vector<Type>& actuals,
                                 const TypeEnv& delta, SourcePos pos, const std::string& rule) const {
  if (formal.size() != actuals.size())
    throw CompileError(pos, rule + ": expected " + std::to_string(formal.size()) +
                                " type arguments, got " + std::to_string(actuals.size()));
  for (auto& a : actuals) check_wellformed(a, delta, pos);
  TypeSubst eta = make_subst(formal, actuals);
  for (std::size_t i = 0; i < formal.size(); ++i) {
    Type bound = substitute(formal[i].bound, eta);
    if (!subtype(actuals[i], bound, delta))
      throw CompileError(pos, rule + ": type argument " + show(actuals[i]) +
                                  " does not implement " + show(bound));
  }
  return eta;
}

namespace {

const Type* lookup(const VarEnv& g, const std::string& x) {
  for (auto it = g.rbegin(); it != g.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

}  // namespace

Type Checker::type_of(const Expr& e, const TypeEnv& delta, const VarEnv& gamma) const {
  const Type int_t = Type::named("int");
  const Type bool_t = Type::named("bool");
  return std::visit(
      [&](const auto& x) -> Type {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ex::Var>) {
          const Type* t = lookup(gamma, x.name);
          if (!t) throw CompileError(e.pos, "t-var: unknown variable " + x.name);
          return *t;
        } else if constexpr (std::is_same_v<T, ex::StructLit>) {
          check_wellformed(x.type, delta, e.pos);
          if (!is_struct(x.type))
            throw CompileError(e.pos, "t-literal: " + show(x.type) + " is not a struct type");
          if (x.type.name == "int" || x.type.name == "bool")
            throw CompileError(e.pos, "t-literal: cannot build a literal of builtin type " + x.type.name);
          auto fs = fields(x.type);
          if (fs.size() != x.fields.size())
            throw CompileError(e.pos, "t-literal: " + show(x.type) + " has " +
                                          std::to_string(fs.size()) + " fields, got " +
                                          std::to_string(x.fields.size()));
          for (std::size_t i = 0; i < fs.size(); ++i)
            check(*x.fields[i], fs[i].type, delta, gamma, "t-literal");
          return x.type;
        } else if constexpr (std::is_same_v<T, ex::Select>) {
          Type r = type_of(*x.receiver, delta, gamma);
          if (is_bottom(r)) return r;
          if (!is_struct(r))
            throw CompileError(e.pos, "t-field: " + show(r) + " is not a struct type");
          for (auto& f : fields(r))
            if (f.name == x.field) return f.type;
          throw CompileError(e.pos, "t-field: " + show(r) + " has no field " + x.field);
        } else if constexpr (std::is_same_v<T, ex::Call>) {
          Type r = type_of(*x.receiver, delta, gamma);
          if (is_bottom(r)) {
            for (auto& a : x.args) type_of(*a, delta, gamma);
            return r;
          }
          std::optional<MethodSpec> spec;
          try {
            spec = method(r, x.method, delta);
          } catch (const CompileError& err) {
            throw CompileError(e.pos, std::string("t-call: ") + err.what());
          }
          if (!spec) throw CompileError(e.pos, "t-call: " + show(r) + " has no method " + x.method);
          TypeSubst eta = check_actuals(spec->sig.formal, x.type_args, delta, e.pos, "t-call");
          if (spec->sig.params.size() != x.args.size())
            throw CompileError(e.pos, "t-call: " + x.method + " expects " +
                                          std::to_string(spec->sig.params.size()) +
                                          " arguments, got " + std::to_string(x.args.size()));
          for (std::size_t i = 0; i < x.args.size(); ++i)
            check(*x.args[i], substitute(spec->sig.params[i].type, eta), delta, gamma, "t-call");
          return substitute(spec->sig.result, eta);
        } else if constexpr (std::is_same_v<T, ex::Assert>) {
          Type from = type_of(*x.operand, delta, gamma);
          check_wellformed(x.type, delta, e.pos);
          if (is_bottom(from) || is_struct(from)) return x.type;  // t-stupid
          if (is_struct(x.type)) {
            Type b = bounds(from, delta);
            if (!subtype(x.type, b, delta))
              throw CompileError(e.pos, "t-assert: impossible type assertion: " + show(x.type) +
                                            " does not implement " + show(from));
          }
          return x.type;
        } else if constexpr (std::is_same_v<T, ex::IntLit>) {
          return int_t;
        } else if constexpr (std::is_same_v<T, ex::BoolLit>) {
          return bool_t;
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          Type l = type_of(*x.lhs, delta, gamma);
          Type r = type_of(*x.rhs, delta, gamma);
          if (x.op == BinaryOp::neq) return bool_t;
          auto need_int = [&](const Type& t, const Expr& at) {
            if (!is_bottom(t) && t != int_t)
              throw CompileError(at.pos, std::string("t-op: operator ") + binary_op_text(x.op) +
                                             " needs int operands, got " + show(t));
          };
          need_int(l, *x.lhs);
          need_int(r, *x.rhs);
          return (x.op == BinaryOp::lt || x.op == BinaryOp::gt) ? bool_t : int_t;
        } else if constexpr (std::is_same_v<T, ex::If>) {
          if (x.result) {
            check(e, *x.result, delta, gamma, "t-if");
            return *x.result;
          }
          check(*x.cond, bool_t, delta, gamma, "t-if");
          Type a = type_of(*x.then_branch, delta, gamma);
          Type b = type_of(*x.else_branch, delta, gamma);
          if (subtype(a, b, delta)) return b;
          if (subtype(b, a, delta)) return a;
          throw CompileError(e.pos, "t-if: branches have unrelated types " + show(a) + " and " + show(b));
        } else if constexpr (std::is_same_v<T, ex::Seq>) {
          type_of(*x.first, delta, gamma);
          return type_of(*x.rest, delta, gamma);
        } else {
          return bottom_type();
        }
      },
      e.node);
}

void Checker::check(const Expr& e, const Type& expected, const TypeEnv& delta, const VarEnv& gamma,
                    const std::string& rule) const {
  if (auto* i = e.as<ex::If>()) {
    check(*i->cond, Type::named("bool"), delta, gamma, "t-if");
    check(*i->then_branch, expected, delta, gamma, rule);
    check(*i->else_branch, expected, delta, gamma, rule);
    return;
  }
  if (auto* s = e.as<ex::Seq>()) {
    type_of(*s->first, delta, gamma);
    check(*s->rest, expected, delta, gamma, rule);
    return;
  }
  Type t = type_of(e, delta, gamma);
  if (!subtype(t, expected, delta))
    throw CompileError(e.pos, rule + ": " + show(t) + " does not implement " + show(expected));
}

std::optional<Type> Checker::try_type_of(const Expr& e, const TypeEnv& delta,
                                         const VarEnv& gamma) const {
  try {
    return type_of(e, delta, gamma);
  } catch (const CompileError&) {
    return std::nullopt;
  }
}

std::optional<Type> Checker::closed_type(const ExprPtr& e) const {
  auto it = closed_cache_.find(e.get());
  if (it != closed_cache_.end()) return it->second;
  auto t = try_type_of(*e, {}, {});
  closed_cache_[e.get()] = t;
  keep_alive_.push_back(e);
  return t;
}

void Checker::check_formal(const TypeFormal& formal, const TypeEnv& outer, SourcePos pos) const {
  TypeEnv delta = outer;
  for (auto& f : formal) {
    for (auto& o : delta)
      if (o.name == f.name) throw CompileError(pos, "t-formal: duplicate type parameter " + f.name);
    delta.push_back(f);
  }
  for (auto& f : formal) {
    if (!is_interface(f.bound))
      throw CompileError(pos, "t-formal: bound " + show(f.bound) + " of " + f.name +
                                  " is not an interface type");
    check_wellformed(f.bound, delta, pos);
  }
}

void Checker::check_signature(const Signature& sig, const TypeEnv& delta, SourcePos pos) const {
  check_formal(sig.formal, delta, pos);
  TypeEnv inner = delta;
  inner.insert(inner.end(), sig.formal.begin(), sig.formal.end());
  std::set<std::string> seen;
  for (auto& p : sig.params) {
    if (!seen.insert(p.name).second) throw CompileError(pos, "t-spec: duplicate parameter " + p.name);
    check_wellformed(p.type, inner, pos);
  }
  check_wellformed(sig.result, inner, pos);
}

void Checker::check_decl(const Decl& d) const {
  if (auto* s = std::get_if<StructDecl>(&d)) {
    check_formal(s->formal, {}, s->pos);
    std::set<std::string> seen;
    for (auto& f : s->fields) {
      if (!seen.insert(f.name).second)
        throw CompileError(s->pos, "t-type: duplicate field " + f.name + " in " + s->name);
      check_wellformed(f.type, s->formal, s->pos);
    }
  } else if (auto* i = std::get_if<InterfaceDecl>(&d)) {
    check_formal(i->formal, {}, i->pos);
    for (std::size_t k = 0; k < i->specs.size(); ++k) {
      check_signature(i->specs[k].sig, i->formal, i->pos);
      for (std::size_t j = 0; j < k; ++j)
        if (i->specs[j].name == i->specs[k].name &&
            !same_signature(i->specs[j].sig, i->specs[k].sig))
          throw CompileError(i->pos, "t-type: conflicting specifications for " + i->specs[k].name +
                                         " in " + i->name);
    }
  } else {
    auto& m = std::get<MethodDecl>(d);
    TypeFormal phi = receiver_formal(m);
    check_formal(phi, {}, m.pos);
    for (auto& f : m.sig.formal)
      for (auto& p : phi)
        if (p.name == f.name)
          throw CompileError(m.pos, "t-func: type parameter " + f.name + " is already bound by the receiver");
    check_signature(m.sig, phi, m.pos);
    TypeEnv delta = phi;
    delta.insert(delta.end(), m.sig.formal.begin(), m.sig.formal.end());
    std::vector<Type> recv_args;
    for (auto& p : m.receiver_params) recv_args.push_back(Type::param(p));
    VarEnv gamma{{m.receiver, Type::named(m.receiver_type, recv_args)}};
    for (auto& p : m.sig.params) {
      if (p.name == m.receiver)
        throw CompileError(m.pos, "t-func: parameter " + p.name + " shadows the receiver");
      gamma.push_back({p.name, p.type});
    }
    check(*m.body, m.sig.result, delta, gamma, "t-func");
  }
}

std::vector<Diagnostic> Checker::check_program() const {
  std::vector<Diagnostic> out = table_errors_;
  for (auto& d : program_.decls) {
    try {
      check_decl(d);
    } catch (const CompileError& e) {
      Diagnostic diag = e.diagnostic();
      if (e.pos().line == 0) {
        SourcePos p = decl_pos(d);
        diag.line = p.line > 0 ? p.line : 1;
        diag.column = p.column > 0 ? p.column : 1;
      }
      out.push_back(diag);
    }
  }
  try {
    type_of(*program_.main, {}, {});
  } catch (const CompileError& e) {
    Diagnostic diag = e.diagnostic();
    if (e.pos().line == 0) {
      diag.line = program_.main_pos.line > 0 ? program_.main_pos.line : 1;
      diag.column = program_.main_pos.column > 0 ? program_.main_pos.column : 1;
    }
    out.push_back(diag);
  }
  return out;
}

std::vector<Diagnostic> typecheck_program(const Program& p) {
  Checker c(p);
  return c.check_program();
}

std::vector<Diagnostic> fgg_typecheck_program(const Program& p) { return typecheck_program(p); }

std::vector<Diagnostic> fg_typecheck_program(const Program& p, Dialect dialect) {
  std::vector<Diagnostic> out;
  for (auto& d : p.decls) {
    bool generic = std::visit(
        [](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, MethodDecl>)
            return !x.receiver_params.empty() || !x.sig.formal.empty();
          else
            return !x.formal.empty();
        },
        d);
    if (generic)
      out.push_back(CompileError(decl_pos(d), "type parameters are not allowed in FG").diagnostic());
  }
  if (dialect == Dialect::fg) {
    for (auto& d : p.decls)
      if (auto* m = std::get_if<MethodDecl>(&d); m && uses_extended_forms(*m->body))
        out.push_back(CompileError(m->pos, "extended FG forms in core FG program").diagnostic());
    if (uses_extended_forms(*p.main))
      out.push_back(CompileError(p.main_pos, "extended FG forms in core FG program").diagnostic());
  }
  auto rest = typecheck_program(p);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace fgg
