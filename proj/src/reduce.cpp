#include "fgg/reduce.hpp"

#include "fgg/printer.hpp"

namespace fgg {

std::string StepOutcome::panic_message() const {
  if (!panic_value_type) return "panic";
  return "Unable to assert " + print_type(*panic_value_type) + " as type " + print_type(*panic_target);
}

const char* run_kind_name(RunResult::Kind k) {
  switch (k) {
    case RunResult::Kind::value: return "value";
    case RunResult::Kind::panic: return "panic";
    case RunResult::Kind::budget: return "budget";
    case RunResult::Kind::stuck: return "stuck";
  }
  return "?";
}

ExprPtr substitute_expr(const ExprPtr& e, const std::map<std::string, ExprPtr>& vars,
                        const TypeSubst& types) {
  if (vars.empty() && types.empty()) return e;
  if (auto* v = e->as<ex::Var>()) {
    auto it = vars.find(v->name);
    return it == vars.end() ? e : it->second;
  }
  std::vector<ExprPtr> kids = children(*e);
  for (auto& k : kids) k = substitute_expr(k, vars, types);
  ExprPtr out = with_children(*e, std::move(kids));
  if (types.empty()) return out;
  Expr copy = *out;
  if (auto* l = std::get_if<ex::StructLit>(&copy.node)) {
    l->type = substitute(l->type, types);
  } else if (auto* c = std::get_if<ex::Call>(&copy.node)) {
    for (auto& t : c->type_args) t = substitute(t, types);
  } else if (auto* a = std::get_if<ex::Assert>(&copy.node)) {
    a->type = substitute(a->type, types);
  } else if (auto* i = std::get_if<ex::If>(&copy.node); i && i->result) {
    i->result = substitute(*i->result, types);
  } else {
    return out;
  }
  return std::make_shared<const Expr>(std::move(copy));
}

namespace {

StepOutcome stuck(std::string why) {
  StepOutcome o;
  o.kind = StepOutcome::Kind::stuck;
  o.reason = std::move(why);
  return o;
}

// Marks every if in tail position of an inlined method body with the method's result type.
ExprPtr annotate_tail(const ExprPtr& e, const Type& result) {
  if (auto* s = e->as<ex::Seq>()) {
    ExprPtr rest = annotate_tail(s->rest, result);
    return rest == s->rest ? e : with_children(*e, {s->first, rest});
  }
  auto* i = e->as<ex::If>();
  if (!i) return e;
  Expr copy = *with_children(*e, {i->cond, annotate_tail(i->then_branch, result),
                                  annotate_tail(i->else_branch, result)});
  std::get<ex::If>(copy.node).result = result;
  return std::make_shared<const Expr>(std::move(copy));
}

StepOutcome stepped(ExprPtr next, ExprPtr redex, std::string rule) {
  StepOutcome o;
  o.kind = StepOutcome::Kind::stepped;
  o.expr = std::move(next);
  o.redex = std::move(redex);
  o.rule = std::move(rule);
  return o;
}

bool neq_ready(const Expr& e) {
  auto* i = e.as<ex::If>();
  if (!i) return false;
  auto* b = i->cond->as<ex::Binary>();
  return b && b->op == BinaryOp::neq && is_value(*b->lhs) && is_value(*b->rhs);
}

}  // namespace

bool Reducer::is_redex(const Expr& e) const {
  if (is_value(e)) return false;
  if (neq_ready(e)) return true;
  auto kids = children(e);
  std::size_t k = strict_arity(e);
  for (std::size_t i = 0; i < k; ++i)
    if (!is_value(*kids[i])) return false;
  return true;
}

ExprPtr Reducer::find_redex(const ExprPtr& e) const {
  if (is_value(*e)) return nullptr;
  if (neq_ready(*e)) return e;
  auto kids = children(*e);
  std::size_t k = strict_arity(*e);
  for (std::size_t i = 0; i < k; ++i)
    if (!is_value(*kids[i])) return find_redex(kids[i]);
  return e;
}

StepOutcome Reducer::step(const ExprPtr& e) const {
  if (is_value(*e)) {
    StepOutcome o;
    o.kind = StepOutcome::Kind::value;
    o.expr = e;
    return o;
  }
  if (!neq_ready(*e)) {
    auto kids = children(*e);
    std::size_t k = strict_arity(*e);
    for (std::size_t i = 0; i < k; ++i) {
      if (is_value(*kids[i])) continue;
      StepOutcome inner = step(kids[i]);
      if (inner.kind != StepOutcome::Kind::stepped) return inner;
      kids[i] = inner.expr;
      inner.expr = with_children(*e, std::move(kids));
      return inner;
    }
  }
  return contract(e);
}

StepOutcome Reducer::contract(const ExprPtr& e) const {
  if (auto* s = e->as<ex::Select>()) {
    auto* l = s->receiver->as<ex::StructLit>();
    if (!l) return stuck("field selection on a non-struct value");
    const StructDecl* d = checker_.find_struct(l->type.name);
    if (!d) return stuck("unknown struct " + l->type.name);
    for (std::size_t i = 0; i < d->fields.size() && i < l->fields.size(); ++i)
      if (d->fields[i].name == s->field) return stepped(l->fields[i], e, "r-fields");
    return stuck(l->type.name + " has no field " + s->field);
  }
  if (auto* c = e->as<ex::Call>()) {
    Type vt = value_type(*c->receiver);
    const MethodDecl* m = checker_.find_method(vt.name, c->method);
    if (!m) return stuck(print_type(vt) + " has no method " + c->method);
    if (m->sig.params.size() != c->args.size() || m->receiver_params.size() != vt.args.size() ||
        m->sig.formal.size() != c->type_args.size())
      return stuck("arity mismatch calling " + c->method);
    std::map<std::string, ExprPtr> vars{{m->receiver, c->receiver}};
    for (std::size_t i = 0; i < c->args.size(); ++i) vars[m->sig.params[i].name] = c->args[i];
    TypeSubst theta;
    for (std::size_t i = 0; i < vt.args.size(); ++i) theta[m->receiver_params[i]] = vt.args[i];
    for (std::size_t i = 0; i < c->type_args.size(); ++i)
      theta[m->sig.formal[i].name] = c->type_args[i];
    ExprPtr body = substitute_expr(m->body, vars, theta);
    return stepped(annotate_tail(body, substitute(m->sig.result, theta)), e, "r-call");
  }
  if (auto* a = e->as<ex::Assert>()) {
    Type vt = value_type(*a->operand);
    if (checker_.subtype(vt, a->type, {})) return stepped(a->operand, e, "r-assert");
    StepOutcome o;
    o.kind = StepOutcome::Kind::panic;
    o.redex = e;
    o.rule = "r-assert";
    o.panic_value_type = vt;
    o.panic_target = a->type;
    return o;
  }
  if (auto* b = e->as<ex::Binary>()) {
    if (b->op == BinaryOp::neq)
      return stepped(bool_lit(!equal(*b->lhs, *b->rhs)), e, "r-ext-neq");
    auto* l = b->lhs->as<ex::IntLit>();
    auto* r = b->rhs->as<ex::IntLit>();
    if (!l || !r) return stuck(std::string("operator ") + binary_op_text(b->op) + " on non-integers");
    switch (b->op) {
      case BinaryOp::lt: return stepped(bool_lit(l->value < r->value), e, "r-ext-op");
      case BinaryOp::gt: return stepped(bool_lit(l->value > r->value), e, "r-ext-op");
      case BinaryOp::add: return stepped(int_lit(l->value + r->value), e, "r-ext-op");
      case BinaryOp::sub: return stepped(int_lit(l->value - r->value), e, "r-ext-op");
      default: break;
    }
  }
  if (auto* i = e->as<ex::If>()) {
    if (neq_ready(*e)) {
      auto* b = i->cond->as<ex::Binary>();
      bool differ = !equal(*b->lhs, *b->rhs);
      return stepped(differ ? i->then_branch : i->else_branch, e, "r-ext-ifneq");
    }
    auto* c = i->cond->as<ex::BoolLit>();
    if (!c) return stuck("if condition is not a boolean");
    return stepped(c->value ? i->then_branch : i->else_branch, e, "r-ext-if");
  }
  if (auto* s = e->as<ex::Seq>()) return stepped(s->rest, e, "r-ext-seq");
  if (e->is<ex::Panic>()) {
    StepOutcome o;
    o.kind = StepOutcome::Kind::panic;
    o.redex = e;
    o.rule = "r-ext-panic";
    return o;
  }
  if (auto* v = e->as<ex::Var>()) return stuck("free variable " + v->name);
  return stuck("no rule applies");
}

RunResult Reducer::run(ExprPtr e, std::size_t max_steps,
                       const std::function<void(const StepOutcome&)>& trace) const {
  RunResult r;
  while (true) {
    if (is_value(*e)) {
      r.kind = RunResult::Kind::value;
      r.value = e;
      return r;
    }
    if (r.steps >= max_steps) {
      r.kind = RunResult::Kind::budget;
      r.value = e;
      r.message = "step budget of " + std::to_string(max_steps) + " exhausted";
      return r;
    }
    StepOutcome o = step(e);
    if (trace) trace(o);
    switch (o.kind) {
      case StepOutcome::Kind::stepped:
        e = o.expr;
        ++r.steps;
        break;
      case StepOutcome::Kind::panic:
        r.kind = RunResult::Kind::panic;
        r.value = e;
        r.message = o.panic_message();
        return r;
      case StepOutcome::Kind::stuck:
        r.kind = RunResult::Kind::stuck;
        r.value = e;
        r.message = o.reason;
        return r;
      case StepOutcome::Kind::value:
        break;
    }
  }
}

StepOutcome fg_step(const ExprPtr& e, const Checker& decls) { return Reducer(decls).step(e); }
StepOutcome fgg_step(const ExprPtr& e, const Checker& decls) { return Reducer(decls).step(e); }

RunResult run(const Program& p, std::size_t max_steps,
              const std::function<void(const StepOutcome&)>& trace) {
  Checker c(p);
  return Reducer(c).run(p.main, max_steps, trace);
}

std::optional<std::size_t> step_count(const Program& p, std::size_t max_steps) {
  RunResult r = run(p, max_steps);
  if (r.kind == RunResult::Kind::value || r.kind == RunResult::Kind::panic) return r.steps;
  return std::nullopt;
}

}  // namespace fgg
