#include "fgg/dicttrans.hpp"

#include <algorithm>
#include <functional>

#include "fgg/printer.hpp"

namespace fgg {

std::string NameMangler::meta_name(const std::string& t) {
  if (t == "int") return "Int_meta";
  if (t == "bool") return "Bool_meta";
  return t + "_meta";
}

std::string NameMangler::method_ptr_name(const std::string& t, const std::string& m) {
  if (t == "int") return "Int_" + m;
  if (t == "bool") return "Bool_" + m;
  return t + "_" + m;
}

const std::vector<std::string>& NameMangler::reserved_prefixes() {
  static const std::vector<std::string> p{"_type", "dict_", "spec_", "param_index_",
                                          "spec_metadata_", "Func_"};
  return p;
}

nlohmann::json inventory_json(const std::vector<InventoryEntry>& inv) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& e : inv)
    arr.push_back({{"name", e.name}, {"kind", e.kind}, {"role", e.role}, {"source", e.source}});
  return arr;
}

std::size_t arity(const Signature& sig) { return sig.formal.size() + sig.params.size(); }

std::size_t max_formal(const Decl& d) {
  if (auto* s = std::get_if<StructDecl>(&d)) return s->formal.size();
  if (auto* i = std::get_if<InterfaceDecl>(&d)) {
    std::size_t n = i->formal.size();
    for (auto& s : i->specs) n = std::max(n, s.sig.formal.size());
    return n;
  }
  return std::get<MethodDecl>(d).sig.formal.size();
}

namespace {

const Type kAny = Type::named("Any");


MethodDecl method_decl(std::string recv, std::string recv_type, std::string name,
                       std::vector<Param> params, Type result, ExprPtr body) {
  MethodDecl m;
  m.receiver = std::move(recv);
  m.receiver_type = std::move(recv_type);
  m.name = std::move(name);
  m.sig.params = std::move(params);
  m.sig.result = std::move(result);
  m.body = std::move(body);
  return m;
}

StructDecl struct_decl(std::string name, std::vector<Field> fields = {}) {
  StructDecl s;
  s.name = std::move(name);
  s.fields = std::move(fields);
  return s;
}

bool has_reserved_prefix(const std::string& id) {
  for (auto& p : NameMangler::reserved_prefixes())
    if (id.rfind(p, 0) == 0) return true;
  return false;
}

}  // namespace

DictTranslator::DictTranslator(const Program& source, DictOptions opts)
    : src_(source), checker_(source), opts_(opts) {}

void DictTranslator::note(const std::string& name, const char* kind, const char* role,
                          const std::string& source) {
  inventory_.push_back({name, kind, role, source});
}

void DictTranslator::check_collisions() const {
  auto reject = [](SourcePos pos, const std::string& id) {
    throw CompileError(pos, "name collision: identifier " + id +
                                " uses a prefix reserved for generated code");
  };
  auto check_formal = [&](const TypeFormal& f, SourcePos pos) {
    for (auto& e : f)
      if (has_reserved_prefix(e.name)) reject(pos, e.name);
  };
  auto check_sig = [&](const Signature& s, SourcePos pos) {
    check_formal(s.formal, pos);
    for (auto& p : s.params)
      if (has_reserved_prefix(p.name)) reject(pos, p.name);
  };
  for (auto& d : src_.decls) {
    SourcePos pos = decl_pos(d);
    if (auto* s = std::get_if<StructDecl>(&d)) {
      if (has_reserved_prefix(s->name)) reject(pos, s->name);
      if (s->name == NameMangler::any)
        throw CompileError(pos, "name collision: Any must be the empty interface");
      check_formal(s->formal, pos);
      for (auto& f : s->fields)
        if (has_reserved_prefix(f.name)) reject(pos, f.name);
    } else if (auto* i = std::get_if<InterfaceDecl>(&d)) {
      if (has_reserved_prefix(i->name)) reject(pos, i->name);
      if (i->name == NameMangler::any && (!i->formal.empty() || !i->specs.empty()))
        throw CompileError(pos, "name collision: Any must be the empty interface");
      check_formal(i->formal, pos);
      for (auto& s : i->specs) {
        if (has_reserved_prefix(s.name)) reject(pos, s.name);
        check_sig(s.sig, pos);
      }
    } else {
      auto& m = std::get<MethodDecl>(d);
      if (has_reserved_prefix(m.name)) reject(pos, m.name);
      if (has_reserved_prefix(m.receiver)) reject(pos, m.receiver);
      for (auto& p : m.receiver_params)
        if (has_reserved_prefix(p)) reject(pos, p);
      check_sig(m.sig, pos);
    }
  }
}

MetaEnv DictTranslator::meta_of(const DictEnv& eta) const {
  MetaEnv z;
  for (auto& [a, d] : eta) z[a] = select(d, NameMangler::type_rep_field);
  return z;
}

std::vector<Param> DictTranslator::as_param(const TypeFormal& formal) const {
  std::vector<Param> out;
  for (std::size_t i = 0; i < formal.size(); ++i)
    out.push_back({NameMangler::dict_field(i), Type::named(NameMangler::dict_name(formal[i].bound.name))});
  return out;
}

ExprPtr DictTranslator::typemeta(const Type& tau, const MetaEnv& zeta) {
  if (tau.is_param) {
    auto it = zeta.find(tau.name);
    if (it == zeta.end()) throw CompileError({}, "typemeta: unbound type parameter " + tau.name);
    return it->second;
  }
  if (tau.name == "int" || tau.name == "bool") used_builtin_metas_.insert(tau.name);
  std::vector<ExprPtr> args;
  for (auto& a : tau.args) args.push_back(typemeta(a, zeta));
  return lit(Type::named(NameMangler::meta_name(tau.name)), std::move(args));
}

ExprPtr DictTranslator::signature_meta(const Signature& sig, const MetaEnv& zeta) {
  MetaEnv z = zeta;
  for (std::size_t i = 0; i < sig.formal.size(); ++i)
    z[sig.formal[i].name] = lit(Type::named(NameMangler::param_index_name(i)), {});
  std::vector<ExprPtr> reps;
  for (auto& f : sig.formal) reps.push_back(typemeta(f.bound, z));
  for (auto& p : sig.params) reps.push_back(typemeta(p.type, z));
  reps.push_back(typemeta(sig.result, z));
  return lit(Type::named(NameMangler::fn_meta_name(arity(sig))), std::move(reps));
}

MethodSpec DictTranslator::spec_mdata(const MethodSpec& spec) const {
  MethodSpec out;
  out.name = NameMangler::spec_name(spec.name);
  out.sig.result = Type::named(NameMangler::fn_meta_name(arity(spec.sig)));
  return out;
}

std::vector<Decl> DictTranslator::meth_ptr(const std::string& t, const MethodSpec& spec) const {
  std::string name = NameMangler::method_ptr_name(t, spec.name);
  std::vector<Param> params{{"rec", kAny}};
  std::vector<ExprPtr> args;
  for (std::size_t j = 0; j < spec.sig.formal.size(); ++j) {
    std::string d = NameMangler::dict_field(j);
    params.push_back({d, kAny});
    args.push_back(assert_to(var(d), Type::named(NameMangler::dict_name(spec.sig.formal[j].bound.name)),
                             Origin::dict));
  }
  for (std::size_t i = 0; i < spec.sig.params.size(); ++i) {
    std::string a = "arg_" + std::to_string(i);
    params.push_back({a, kAny});
    args.push_back(var(a));
  }
  ExprPtr body = call(assert_to(var("rec"), Type::named(t), Origin::erase), spec.name, {}, std::move(args));
  return {struct_decl(name),
          method_decl("this", name, NameMangler::apply, std::move(params), kAny, std::move(body))};
}

std::vector<Decl> DictTranslator::translate_interface(const InterfaceDecl& d) {
  const bool meta = !opts_.no_type_metadata;
  std::vector<Decl> out;
  InterfaceDecl erased;
  erased.name = d.name;
  for (auto& s : d.specs) {
    MethodSpec e{s.name, {}};
    e.sig.params = as_param(s.sig.formal);
    for (auto& p : s.sig.params) e.sig.params.push_back({p.name, kAny});
    e.sig.result = kAny;
    erased.specs.push_back(std::move(e));
  }
  if (meta)
    for (auto& s : d.specs) erased.specs.push_back(spec_mdata(s));
  out.push_back(erased);
  note(d.name, "interface", "interface", d.name);

  std::vector<Field> dict_fields;
  for (auto& s : d.specs) dict_fields.push_back({s.name, Type::named(NameMangler::func_name(arity(s.sig)))});
  if (meta) dict_fields.push_back({NameMangler::type_rep_field, Type::named(NameMangler::type_mdata)});
  std::string dict = NameMangler::dict_name(d.name);
  out.push_back(struct_decl(dict, std::move(dict_fields)));
  dict_structs_.insert(dict);
  note(dict, "struct", "dictionary", d.name);

  if (meta) {
    std::string mname = NameMangler::meta_name(d.name);
    std::vector<Field> fs;
    MetaEnv zeta;
    for (std::size_t i = 0; i < d.formal.size(); ++i) {
      fs.push_back({NameMangler::type_field(i), Type::named(NameMangler::type_mdata)});
      zeta[d.formal[i].name] = select(var("this"), NameMangler::type_field(i));
    }
    out.push_back(struct_decl(mname, std::move(fs)));
    meta_structs_.insert(mname);
    note(mname, "struct", "type-rep", d.name);
    ExprPtr body = var("x");
    for (auto it = d.specs.rbegin(); it != d.specs.rend(); ++it) {
      ExprPtr got = call(assert_to(var("x"), Type::named(d.name), Origin::sim),
                         NameMangler::spec_name(it->name), {}, {}, Origin::sim);
      ExprPtr want = signature_meta(it->sig, zeta);
      body = if_else(binary(BinaryOp::neq, got, want, Origin::sim), panic_expr(Origin::sim), body,
                     Origin::sim);
    }
    out.push_back(method_decl("this", mname, NameMangler::try_cast, {{"x", kAny}}, kAny, body));
    note(mname + "." + NameMangler::try_cast, "method", "type-assertion", d.name);
  }

  for (auto& s : d.specs) {
    auto mp = meth_ptr(d.name, s);
    method_ptr_structs_.insert(NameMangler::method_ptr_name(d.name, s.name));
    note(NameMangler::method_ptr_name(d.name, s.name), "struct", "method-pointer", d.name);
    out.insert(out.end(), mp.begin(), mp.end());
  }
  return out;
}

std::vector<Decl> DictTranslator::translate_struct(const StructDecl& d) {
  const bool meta = !opts_.no_type_metadata;
  std::vector<Decl> out;
  StructDecl erased = struct_decl(d.name);
  for (auto& f : d.fields) erased.fields.push_back({f.name, kAny});
  for (auto& p : as_param(d.formal)) erased.fields.push_back(p);
  out.push_back(erased);
  note(d.name, "struct", "struct", d.name);
  if (!meta) return out;

  std::string mname = NameMangler::meta_name(d.name);
  std::vector<Field> fs;
  for (std::size_t i = 0; i < d.formal.size(); ++i)
    fs.push_back({NameMangler::type_field(i), Type::named(NameMangler::type_mdata)});
  out.push_back(struct_decl(mname, std::move(fs)));
  meta_structs_.insert(mname);
  note(mname, "struct", "type-rep", d.name);

  const Type t = Type::named(d.name);
  ExprPtr body = var("x");
  for (std::size_t i = d.formal.size(); i-- > 0;) {
    ExprPtr mine = select(var("this"), NameMangler::type_field(i), Origin::sim);
    ExprPtr theirs = select(select(assert_to(var("x"), t, Origin::sim), NameMangler::dict_field(i), Origin::sim),
                            NameMangler::type_rep_field, Origin::sim);
    body = if_else(binary(BinaryOp::neq, mine, theirs, Origin::sim), panic_expr(Origin::sim), body,
                   Origin::sim);
  }
  body = seq(assert_to(var("x"), t, Origin::sim), body, Origin::sim);
  out.push_back(method_decl("this", mname, NameMangler::try_cast, {{"x", kAny}}, kAny, body));
  note(mname + "." + NameMangler::try_cast, "method", "type-assertion", d.name);
  return out;
}

std::vector<Decl> DictTranslator::translate_method(const MethodDecl& d) {
  const bool meta = !opts_.no_type_metadata;
  std::vector<Decl> out;
  TypeFormal phi = checker_.receiver_formal(d);
  DictEnv eta;
  for (std::size_t i = 0; i < phi.size(); ++i)
    eta[phi[i].name] = select(var(d.receiver), NameMangler::dict_field(i));
  for (std::size_t j = 0; j < d.sig.formal.size(); ++j)
    eta[d.sig.formal[j].name] = var(NameMangler::dict_field(j));
  TypeEnv delta = phi;
  delta.insert(delta.end(), d.sig.formal.begin(), d.sig.formal.end());
  std::vector<Type> recv_args;
  for (auto& p : d.receiver_params) recv_args.push_back(Type::param(p));
  VarEnv gamma{{d.receiver, Type::named(d.receiver_type, recv_args)}};
  for (auto& p : d.sig.params) gamma.push_back({p.name, p.type});

  std::vector<Param> params = as_param(d.sig.formal);
  for (auto& p : d.sig.params) params.push_back({p.name, kAny});
  recv_name_ = d.receiver;
  recv_type_ = d.receiver_type;
  ExprPtr body = translate_expr(d.body, delta, eta, gamma);
  recv_name_.clear();
  recv_type_.clear();
  out.push_back(method_decl(d.receiver, d.receiver_type, d.name, std::move(params), kAny, body));
  note(d.receiver_type + "." + d.name, "method", "method", d.receiver_type);

  if (meta) {
    MetaEnv zeta;
    for (std::size_t i = 0; i < phi.size(); ++i)
      zeta[phi[i].name] = select(select(var("this"), NameMangler::dict_field(i)), NameMangler::type_rep_field);
    MethodSpec sm = spec_mdata({d.name, d.sig});
    out.push_back(method_decl("this", d.receiver_type, sm.name, {}, sm.sig.result,
                              signature_meta(d.sig, zeta)));
    note(d.receiver_type + "." + sm.name, "method", "signature-rep", d.receiver_type);
  }
  auto mp = meth_ptr(d.receiver_type, {d.name, d.sig});
  method_ptr_structs_.insert(NameMangler::method_ptr_name(d.receiver_type, d.name));
  note(NameMangler::method_ptr_name(d.receiver_type, d.name), "struct", "method-pointer", d.receiver_type);
  out.insert(out.end(), mp.begin(), mp.end());
  return out;
}

ExprPtr DictTranslator::make_dict(const Type& tau, const Type& bound, const TypeEnv& delta,
                                  const DictEnv& eta) {
  if (!checker_.subtype(tau, bound, delta))
    throw std::logic_error("makeDict: " + print_type(tau) + " does not implement " + print_type(bound));
  const Type dict = Type::named(NameMangler::dict_name(bound.name));
  MethodSet ms = checker_.methods(bound, delta);
  std::vector<ExprPtr> fields;
  if (tau.is_param) {
    auto it = eta.find(tau.name);
    if (it == eta.end()) throw std::logic_error("makeDict: no dictionary for " + tau.name);
    if (checker_.bounds(tau, delta) == bound) return it->second;
    for (auto& m : ms) fields.push_back(select(it->second, m.name));
    if (!opts_.no_type_metadata) fields.push_back(select(it->second, NameMangler::type_rep_field));
    return lit(dict, std::move(fields));
  }
  for (auto& m : ms) fields.push_back(lit(Type::named(NameMangler::method_ptr_name(tau.name, m.name)), {}));
  if (!opts_.no_type_metadata) fields.push_back(typemeta(tau, meta_of(eta)));
  return lit(dict, std::move(fields));
}

Type DictTranslator::static_type(const ExprPtr& e, const TypeEnv& delta, const VarEnv& gamma) const {
  if (delta.empty() && gamma.empty()) {
    auto t = checker_.closed_type(e);
    if (!t) throw CompileError(e->pos, "cannot translate an ill-typed term: " + print_expr(e));
    return *t;
  }
  return checker_.type_of(*e, delta, gamma);
}

ExprPtr DictTranslator::coerce(const Translated& t, const std::string& type) {
  if (opts_.skip_redundant_asserts && t.fg_type == type) return t.expr;
  return assert_to(t.expr, Type::named(type), Origin::erase);
}

ExprPtr DictTranslator::translate_expr(const ExprPtr& e, const TypeEnv& delta, const DictEnv& eta,
                                       const VarEnv& gamma) {
  return tr(e, delta, eta, gamma).expr;
}

DictTranslator::Translated DictTranslator::tr(const ExprPtr& e, const TypeEnv& delta,
                                              const DictEnv& eta, const VarEnv& gamma) {
  auto keep_pos = [&](ExprPtr x) {
    if (x->pos.line == 0 && e->pos.line != 0) {
      Expr c = *x;
      c.pos = e->pos;
      return std::make_shared<const Expr>(std::move(c));
    }
    return x;
  };
  if (auto* v = e->as<ex::Var>()) return {e, v->name == recv_name_ ? recv_type_ : ""};
  if (e->is<ex::IntLit>()) return {e, "int"};
  if (e->is<ex::BoolLit>()) return {e, "bool"};
  if (e->is<ex::Panic>()) return {e, ""};
  if (auto* l = e->as<ex::StructLit>()) {
    std::vector<ExprPtr> fields;
    for (auto& f : l->fields) fields.push_back(tr(f, delta, eta, gamma).expr);
    const StructDecl* s = checker_.find_struct(l->type.name);
    if (!s) throw CompileError(e->pos, "unknown struct " + l->type.name);
    TypeSubst phi = make_subst(s->formal, l->type.args);
    for (std::size_t i = 0; i < s->formal.size(); ++i)
      fields.push_back(make_dict(l->type.args[i], substitute(s->formal[i].bound, phi), delta, eta));
    return {keep_pos(lit(Type::named(l->type.name), std::move(fields))), l->type.name};
  }
  if (auto* s = e->as<ex::Select>()) {
    Type rt = static_type(s->receiver, delta, gamma);
    ExprPtr recv = coerce(tr(s->receiver, delta, eta, gamma), rt.name);
    return {keep_pos(select(recv, s->field)), ""};
  }
  if (auto* c = e->as<ex::Call>()) {
    Type rt = static_type(c->receiver, delta, gamma);
    auto spec = checker_.method(rt, c->method, delta);
    if (!spec) throw CompileError(e->pos, print_type(rt) + " has no method " + c->method);
    TypeSubst psi = make_subst(spec->sig.formal, c->type_args);
    std::vector<ExprPtr> args;
    for (std::size_t j = 0; j < spec->sig.formal.size(); ++j)
      args.push_back(make_dict(c->type_args[j], substitute(spec->sig.formal[j].bound, psi), delta, eta));
    for (auto& a : c->args) args.push_back(tr(a, delta, eta, gamma).expr);
    Translated recv = tr(c->receiver, delta, eta, gamma);
    if (rt.is_param) {
      auto it = eta.find(rt.name);
      if (it == eta.end()) throw CompileError(e->pos, "no dictionary for " + rt.name);
      args.insert(args.begin(), recv.expr);
      return {keep_pos(call(select(it->second, c->method), NameMangler::apply, {}, std::move(args))), ""};
    }
    return {keep_pos(call(coerce(recv, rt.name), c->method, {}, std::move(args))), ""};
  }
  if (auto* a = e->as<ex::Assert>()) {
    if (opts_.no_type_metadata)
      throw CompileError(e->pos, "type assertions need type metadata");
    ExprPtr operand = tr(a->operand, delta, eta, gamma).expr;
    return {keep_pos(call(typemeta(a->type, meta_of(eta)), NameMangler::try_cast, {}, {operand})), ""};
  }
  if (auto* b = e->as<ex::Binary>()) {
    Translated l = tr(b->lhs, delta, eta, gamma);
    Translated r = tr(b->rhs, delta, eta, gamma);
    if (b->op == BinaryOp::neq) return {keep_pos(binary(b->op, l.expr, r.expr)), "bool"};
    bool cmp = b->op == BinaryOp::lt || b->op == BinaryOp::gt;
    return {keep_pos(binary(b->op, coerce(l, "int"), coerce(r, "int"))), cmp ? "bool" : "int"};
  }
  if (auto* i = e->as<ex::If>()) {
    ExprPtr cond;
    auto* nb = i->cond->as<ex::Binary>();
    if (nb && nb->op == BinaryOp::neq)
      cond = tr(i->cond, delta, eta, gamma).expr;
    else
      cond = coerce(tr(i->cond, delta, eta, gamma), "bool");
    ExprPtr out = keep_pos(if_else(cond, tr(i->then_branch, delta, eta, gamma).expr,
                                   tr(i->else_branch, delta, eta, gamma).expr));
    if (i->result) {
      // An inlined body: translated methods all return Any.
      Expr copy = *out;
      std::get<ex::If>(copy.node).result = kAny;
      out = std::make_shared<const Expr>(std::move(copy));
    }
    return {out, ""};
  }
  if (auto* s = e->as<ex::Seq>())
    return {keep_pos(seq(tr(s->first, delta, eta, gamma).expr, tr(s->rest, delta, eta, gamma).expr)), ""};
  throw CompileError(e->pos, "cannot translate expression");
}

DictTranslation DictTranslator::translate_program() {
  check_collisions();
  const bool meta = !opts_.no_type_metadata;
  if (opts_.no_type_metadata) {
    auto has_assert = [](const ExprPtr& e) {
      std::function<bool(const Expr&)> go = [&](const Expr& x) {
        if (x.is<ex::Assert>()) return true;
        for (auto& c : children(x))
          if (go(*c)) return true;
        return false;
      };
      return go(*e);
    };
    for (auto& d : src_.decls)
      if (auto* m = std::get_if<MethodDecl>(&d); m && has_assert(m->body))
        throw CompileError(m->pos, "type assertions need type metadata");
    if (has_assert(src_.main)) throw CompileError(src_.main_pos, "type assertions need type metadata");
  }

  std::set<std::size_t> arities;
  std::size_t max_f = 0;
  bool declares_any = false;
  for (auto& d : src_.decls) {
    max_f = std::max(max_f, max_formal(d));
    if (auto* i = std::get_if<InterfaceDecl>(&d)) {
      for (auto& s : i->specs) arities.insert(arity(s.sig));
      if (i->name == NameMangler::any) declares_any = true;
    } else if (auto* m = std::get_if<MethodDecl>(&d)) {
      arities.insert(arity(m->sig));
    }
  }

  std::vector<Decl> body;
  for (auto& d : src_.decls) {
    std::vector<Decl> part;
    if (auto* i = std::get_if<InterfaceDecl>(&d)) part = translate_interface(*i);
    else if (auto* s = std::get_if<StructDecl>(&d)) part = translate_struct(*s);
    else part = translate_method(std::get<MethodDecl>(d));
    body.insert(body.end(), part.begin(), part.end());
  }
  ExprPtr main = translate_expr(src_.main, {}, {}, {});

  DictTranslation out;
  out.program.dialect = Dialect::fg_extended;
  auto& decls = out.program.decls;
  auto family = [&](Decl d, const char* kind, const char* role) {
    note(decl_name(d), kind, role, "");
    decls.push_back(std::move(d));
  };
  if (!declares_any) family(InterfaceDecl{NameMangler::any, {}, {}, {}}, "interface", "any");
  if (meta) {
    for (std::size_t i = 0; i < max_f; ++i) {
      std::string n = NameMangler::param_index_name(i);
      family(struct_decl(n), "struct", "param-index");
      decls.push_back(method_decl("this", n, NameMangler::try_cast, {{"x", kAny}}, kAny, panic_expr()));
      meta_structs_.insert(n);
    }
    MethodSpec tc{NameMangler::try_cast, {{}, {{"x", kAny}}, kAny}};
    family(InterfaceDecl{NameMangler::type_mdata, {}, {tc}, {}}, "interface", "type-rep-interface");
    for (std::size_t n : arities) {
      std::vector<Field> fs;
      for (std::size_t i = 0; i <= n; ++i)
        fs.push_back({NameMangler::type_field(i), Type::named(NameMangler::type_mdata)});
      family(struct_decl(NameMangler::fn_meta_name(n), std::move(fs)), "struct", "signature-rep");
      meta_structs_.insert(NameMangler::fn_meta_name(n));
    }
  }
  for (std::size_t n : arities) {
    MethodSpec apply{NameMangler::apply, {}};
    apply.sig.params.push_back({"rec", kAny});
    for (std::size_t i = 1; i <= n; ++i) apply.sig.params.push_back({"x_" + std::to_string(i), kAny});
    apply.sig.result = kAny;
    family(InterfaceDecl{NameMangler::func_name(n), {}, {apply}, {}}, "interface", "function");
  }
  for (auto& b : used_builtin_metas_) {
    std::string n = NameMangler::meta_name(b);
    family(struct_decl(n), "struct", "type-rep");
    ExprPtr tc = seq(assert_to(var("x"), Type::named(b), Origin::sim), var("x"), Origin::sim);
    decls.push_back(method_decl("this", n, NameMangler::try_cast, {{"x", kAny}}, kAny, tc));
    meta_structs_.insert(n);
  }
  decls.insert(decls.end(), body.begin(), body.end());
  out.program.main = main;

  std::set<std::string> types;
  std::set<std::pair<std::string, std::string>> methods;
  for (auto& d : decls) {
    if (auto* m = std::get_if<MethodDecl>(&d)) {
      if (!methods.insert({m->receiver_type, m->name}).second)
        throw CompileError({}, "name collision: generated method " + m->receiver_type + "." + m->name +
                                   " is declared twice");
    } else if (!types.insert(decl_name(d)).second) {
      throw CompileError({}, "name collision: generated type " + decl_name(d) + " is declared twice");
    }
  }

  out.dict_structs = dict_structs_;
  out.method_ptr_structs = method_ptr_structs_;
  out.meta_structs = meta_structs_;
  out.inventory = inventory_;
  return out;
}

DictTranslation translate_program(const Program& source, const DictOptions& opts) {
  DictTranslator t(source, opts);
  return t.translate_program();
}

}  // namespace fgg
