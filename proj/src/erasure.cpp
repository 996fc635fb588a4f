#include "fgg/erasure.hpp"

#include <functional>

#include "fgg/typecheck.hpp"

namespace fgg {

namespace {

const Type kAny = Type::named("Any");

Type erase_type(const Type& t) {
  if (t.is_param) return kAny;
  return Type::named(t.name);
}

class Eraser {
 public:
  explicit Eraser(const Program& p) : src_(p), checker_(p) {}

  ErasureTranslation run() {
    ErasureTranslation out;
    out.program.dialect = Dialect::fg_extended;
    bool declares_any = false;
    for (auto& d : src_.decls) {
      if (auto* i = std::get_if<InterfaceDecl>(&d); i && i->name == "Any") {
        if (!i->formal.empty() || !i->specs.empty())
          throw CompileError(i->pos, "name collision: Any must be the empty interface");
        declares_any = true;
      }
      if (auto* s = std::get_if<StructDecl>(&d); s && s->name == "Any")
        throw CompileError(s->pos, "name collision: Any must be the empty interface");
    }
    if (!declares_any) out.program.decls.push_back(InterfaceDecl{"Any", {}, {}, {}});

    for (auto& d : src_.decls) {
      if (auto* s = std::get_if<StructDecl>(&d)) {
        StructDecl e{s->name, {}, {}, s->pos};
        for (auto& f : s->fields) e.fields.push_back({f.name, kAny});
        out.program.decls.push_back(e);
      } else if (auto* i = std::get_if<InterfaceDecl>(&d)) {
        InterfaceDecl e{i->name, {}, {}, i->pos};
        for (auto& s : i->specs) e.specs.push_back({s.name, erase_sig(s.sig)});
        out.program.decls.push_back(e);
      } else {
        auto& m = std::get<MethodDecl>(d);
        MethodDecl e = m;
        e.receiver_params.clear();
        e.sig = erase_sig(m.sig);
        TypeEnv delta = checker_.receiver_formal(m);
        delta.insert(delta.end(), m.sig.formal.begin(), m.sig.formal.end());
        std::vector<Type> targs;
        for (auto& p : m.receiver_params) targs.push_back(Type::param(p));
        VarEnv gamma{{m.receiver, Type::named(m.receiver_type, targs)}};
        for (auto& p : m.sig.params) gamma.push_back({p.name, p.type});
        recv_ = m.receiver;
        recv_type_ = m.receiver_type;
        e.body = er(m.body, delta, gamma).expr;
        recv_.clear();
        out.program.decls.push_back(e);
      }
    }
    out.program.main = er(src_.main, {}, {}).expr;
    out.program.main_pos = src_.main_pos;
    if (saw_assert_)
      out.warnings.push_back({"erasure does not preserve type assertion behaviour", assert_pos_.line,
                              assert_pos_.column, "warning"});
    return out;
  }

 private:
  struct Erased {
    ExprPtr expr;
    std::string type;  // FG static type when it is not Any
  };

  static Signature erase_sig(const Signature& s) {
    Signature e;
    for (auto& p : s.params) e.params.push_back({p.name, kAny});
    e.result = kAny;
    return e;
  }

  static ExprPtr coerce(const Erased& e, const std::string& type) {
    if (e.type == type) return e.expr;
    return assert_to(e.expr, Type::named(type), Origin::erase);
  }

  Type static_type(const ExprPtr& e, const TypeEnv& delta, const VarEnv& gamma) const {
    if (delta.empty() && gamma.empty()) {
      auto t = checker_.closed_type(e);
      if (!t) throw CompileError(e->pos, "cannot erase an ill-typed term");
      return *t;
    }
    return checker_.type_of(*e, delta, gamma);
  }

  // Name of the FG type a receiver of FGG type t must be asserted to.
  std::string receiver_name(const Type& t, const TypeEnv& delta) const {
    if (!t.is_param) return t.name;
    return checker_.bounds(t, delta).name;
  }

  Erased er(const ExprPtr& e, const TypeEnv& delta, const VarEnv& gamma) {
    if (auto* v = e->as<ex::Var>()) return {e, v->name == recv_ ? recv_type_ : ""};
    if (e->is<ex::IntLit>()) return {e, "int"};
    if (e->is<ex::BoolLit>()) return {e, "bool"};
    if (e->is<ex::Panic>()) return {e, ""};
    if (auto* l = e->as<ex::StructLit>()) {
      std::vector<ExprPtr> fs;
      for (auto& f : l->fields) fs.push_back(er(f, delta, gamma).expr);
      return {lit(Type::named(l->type.name), fs), l->type.name};
    }
    if (auto* s = e->as<ex::Select>()) {
      Type rt = static_type(s->receiver, delta, gamma);
      return {select(coerce(er(s->receiver, delta, gamma), rt.name), s->field), ""};
    }
    if (auto* c = e->as<ex::Call>()) {
      Type rt = static_type(c->receiver, delta, gamma);
      ExprPtr recv = coerce(er(c->receiver, delta, gamma), receiver_name(rt, delta));
      std::vector<ExprPtr> args;
      for (auto& a : c->args) args.push_back(er(a, delta, gamma).expr);
      return {call(recv, c->method, {}, args), ""};
    }
    if (auto* a = e->as<ex::Assert>()) {
      if (!saw_assert_) assert_pos_ = e->pos;
      saw_assert_ = true;
      Type t = erase_type(a->type);
      return {assert_to(er(a->operand, delta, gamma).expr, t), t.name == "Any" ? "" : t.name};
    }
    if (auto* b = e->as<ex::Binary>()) {
      Erased l = er(b->lhs, delta, gamma), r = er(b->rhs, delta, gamma);
      if (b->op == BinaryOp::neq) return {binary(b->op, l.expr, r.expr), "bool"};
      bool cmp = b->op == BinaryOp::lt || b->op == BinaryOp::gt;
      return {binary(b->op, coerce(l, "int"), coerce(r, "int")), cmp ? "bool" : "int"};
    }
    if (auto* i = e->as<ex::If>()) {
      auto* nb = i->cond->as<ex::Binary>();
      Erased c = er(i->cond, delta, gamma);
      ExprPtr cond = (nb && nb->op == BinaryOp::neq) ? c.expr : coerce(c, "bool");
      return {if_else(cond, er(i->then_branch, delta, gamma).expr, er(i->else_branch, delta, gamma).expr), ""};
    }
    if (auto* s = e->as<ex::Seq>())
      return {seq(er(s->first, delta, gamma).expr, er(s->rest, delta, gamma).expr), ""};
    throw CompileError(e->pos, "cannot erase expression");
  }

  const Program& src_;
  Checker checker_;
  std::string recv_;
  std::string recv_type_;
  bool saw_assert_ = false;
  SourcePos assert_pos_;
};

}  // namespace

ErasureTranslation erase_program(const Program& p) { return Eraser(p).run(); }

ExprPtr erase_value(const ExprPtr& v) {
  if (auto* l = v->as<ex::StructLit>()) {
    std::vector<ExprPtr> fs;
    for (auto& f : l->fields) fs.push_back(erase_value(f));
    return lit(Type::named(l->type.name), fs);
  }
  return v;
}

}  // namespace fgg
