#include "fgg/cosim.hpp"

#include <algorithm>

#include "fgg/printer.hpp"

namespace fgg {

const char* redex_class_name(RedexClass c) {
  switch (c) {
    case RedexClass::erase: return "erase";
    case RedexClass::sim: return "sim";
    case RedexClass::dict: return "dict";
    default: return "ordinary";
  }
}

nlohmann::json report_json(const CorrespondenceReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (auto& s : r.steps)
    steps.push_back({{"fgg_step_index", s.fgg_step_index},
                     {"fgg_rule", s.fgg_rule},
                     {"macro_step_trace",
                      {{"erase_steps", s.macro.erase_steps}, {"rule", s.macro.rule}, {"sim_steps", s.macro.sim_steps}}},
                     {"dict_normalization_steps", s.dict_normalization_steps},
                     {"matched", s.matched}});
  nlohmann::json j{{"matched", r.matched},
                   {"steps", steps},
                   {"terminal", {{"kind", r.terminal_kind}, {"both_sides_agree", r.both_sides_agree}}}};
  if (r.mismatch_index)
    j["mismatch"] = {{"index", *r.mismatch_index},
                     {"reason", r.mismatch_reason},
                     {"fgg_term", r.fgg_term},
                     {"fg_term", r.fg_term},
                     {"expected_term", r.expected_term}};
  return j;
}

namespace {

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

bool is_type_field(const std::string& f) { return f == "_type" || starts_with(f, "_type_"); }
bool is_dict_field(const std::string& f) { return starts_with(f, "dict_"); }

ExprPtr field_of(const ex::StructLit& lit, const Checker& c, const std::string& f) {
  const StructDecl* s = c.find_struct(lit.type.name);
  if (!s) return nullptr;
  for (std::size_t i = 0; i < s->fields.size() && i < lit.fields.size(); ++i)
    if (s->fields[i].name == f) return lit.fields[i];
  return nullptr;
}

}  // namespace

Cosim::Cosim(const Program& source, DictOptions opts) : src_(source) {
  fgg_checker_ = std::make_unique<Checker>(src_);
  translator_ = std::make_unique<DictTranslator>(src_, opts);
  translation_ = translator_->translate_program();
  target_ = std::make_unique<Program>(translation_.program);
  fg_checker_ = std::make_unique<Checker>(*target_);
}

bool Cosim::is_dict_value_lit(const Expr& e) const {
  auto* l = e.as<ex::StructLit>();
  return l && translation_.dict_structs.count(l->type.name) && is_value(e);
}

bool Cosim::is_meta_value_lit(const Expr& e) const {
  auto* l = e.as<ex::StructLit>();
  return l && translation_.meta_structs.count(l->type.name) && is_value(e);
}

RedexClass Cosim::classify(const ExprPtr& r) const {
  if (auto* a = r->as<ex::Assert>()) {
    (void)a;
    if (r->origin == Origin::erase) return RedexClass::erase;
    if (r->origin == Origin::sim) return RedexClass::sim;
    if (r->origin == Origin::dict) return RedexClass::dict;
    return RedexClass::ordinary;
  }
  if (r->origin == Origin::sim &&
      (r->is<ex::Seq>() || r->is<ex::If>() || r->is<ex::Binary>() || r->is<ex::Panic>()))
    return RedexClass::sim;
  if (auto* s = r->as<ex::Select>()) {
    if (is_dict_value_lit(*s->receiver) && !is_type_field(s->field)) return RedexClass::dict;
    if (is_type_field(s->field) || is_dict_field(s->field)) return RedexClass::sim;
    return RedexClass::ordinary;
  }
  if (auto* c = r->as<ex::Call>()) {
    if (starts_with(c->method, "spec_") && is_value(*c->receiver)) return RedexClass::sim;
    auto* l = c->receiver->as<ex::StructLit>();
    if (l && c->method == NameMangler::apply && translation_.method_ptr_structs.count(l->type.name))
      return RedexClass::dict;
  }
  return RedexClass::ordinary;
}

ExprPtr Cosim::inline_apply(const std::string& ptr, const std::vector<ExprPtr>& args) const {
  const MethodDecl* m = fg_checker_->find_method(ptr, NameMangler::apply);
  if (!m || m->sig.params.size() != args.size()) return nullptr;
  std::map<std::string, ExprPtr> vars;
  for (std::size_t i = 0; i < args.size(); ++i) vars[m->sig.params[i].name] = args[i];
  return substitute_expr(m->body, vars, {});
}

std::optional<ExprPtr> Cosim::contract_dict(const ExprPtr& e) const {
  if (auto* s = e->as<ex::Select>()) {
    auto* lit = s->receiver->as<ex::StructLit>();
    if (!lit || !is_value(*s->receiver)) return std::nullopt;
    // dictName(t){v}.f, v.dict_i, v._type_i, v._type
    bool applies = translation_.dict_structs.count(lit->type.name) || is_dict_field(s->field) ||
                   (is_type_field(s->field) && translation_.meta_structs.count(lit->type.name));
    if (!applies) return std::nullopt;
    if (ExprPtr f = field_of(*lit, *fg_checker_, s->field)) return f;
    return std::nullopt;
  }
  if (auto* c = e->as<ex::Call>()) {
    auto* lit = c->receiver->as<ex::StructLit>();
    if (lit && c->method == NameMangler::apply && lit->fields.empty() &&
        translation_.method_ptr_structs.count(lit->type.name)) {
      if (ExprPtr b = inline_apply(lit->type.name, c->args)) return b;
    }
    return std::nullopt;
  }
  if (auto* a = e->as<ex::Assert>()) {
    // dictName(t){v}.(dictName(t))
    if (e->origin == Origin::dict && is_dict_value_lit(*a->operand) &&
        a->operand->as<ex::StructLit>()->type.name == a->type.name)
      return a->operand;
    // refinement: e.(t) to e.(u) when e : u, u <: t, u != t
    auto u = fg_checker_->closed_type(a->operand);
    if (u && !is_bottom(*u) && *u != a->type && fg_checker_->subtype(*u, a->type, {})) {
      Expr copy = *e;
      copy.node = ex::Assert{a->operand, *u};
      return std::make_shared<const Expr>(std::move(copy));
    }
  }
  return std::nullopt;
}

std::vector<Position> Cosim::dict_redex_positions(const ExprPtr& e) const {
  std::vector<Position> out;
  Position cur;
  std::function<void(const ExprPtr&)> go = [&](const ExprPtr& x) {
    if (contract_dict(x)) out.push_back(cur);
    auto kids = children(*x);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      cur.push_back(i);
      go(kids[i]);
      cur.pop_back();
    }
  };
  go(e);
  return out;
}

ExprPtr Cosim::contract_dict_at(const ExprPtr& e, const Position& p) const {
  std::function<ExprPtr(const ExprPtr&, std::size_t)> go = [&](const ExprPtr& x, std::size_t depth) -> ExprPtr {
    if (depth == p.size()) {
      auto r = contract_dict(x);
      return r ? *r : nullptr;
    }
    auto kids = children(*x);
    if (p[depth] >= kids.size()) return nullptr;
    ExprPtr k = go(kids[p[depth]], depth + 1);
    if (!k) return nullptr;
    kids[p[depth]] = k;
    return with_children(*x, std::move(kids));
  };
  return go(e, 0);
}

ExprPtr Cosim::norm_rec(const ExprPtr& e, std::size_t& steps, std::size_t bound, bool check_types,
                        std::string& error) const {
  if (!error.empty()) return e;
  auto kids = children(*e);
  bool changed = false;
  for (auto& k : kids) {
    ExprPtr n = norm_rec(k, steps, bound, check_types, error);
    if (n != k) {
      k = n;
      changed = true;
    }
  }
  ExprPtr cur = changed ? with_children(*e, std::move(kids)) : e;
  auto r = contract_dict(cur);
  if (!r) return cur;
  if (++steps > bound) {
    error = "dictionary resolution exceeded " + std::to_string(bound) + " steps";
    return cur;
  }
  if (check_types) {
    auto before = fg_checker_->closed_type(cur);
    auto after = fg_checker_->closed_type(*r);
    if (before && (!after || !fg_checker_->subtype(*after, *before, {}))) {
      error = "dictionary resolution broke typing at " + print_expr(cur);
      return cur;
    }
    if ((*r)->is<ex::Panic>()) {
      error = "dictionary resolution produced a panic";
      return cur;
    }
  }
  return norm_rec(*r, steps, bound, check_types, error);
}

NormalizeResult Cosim::dict_normalize(const ExprPtr& e, std::size_t bound, bool check_types) const {
  NormalizeResult r;
  r.expr = norm_rec(e, r.steps, bound, check_types, r.error);
  r.overflow = r.steps > bound;
  return r;
}

ExprPtr Cosim::consume_erase(const ExprPtr& e) const {
  Reducer red(*fg_checker_);
  ExprPtr cur = e;
  for (;;) {
    ExprPtr r = red.find_redex(cur);
    if (!r || classify(r) != RedexClass::erase) return cur;
    StepOutcome o = red.step(cur);
    if (o.kind != StepOutcome::Kind::stepped) return cur;
    cur = o.expr;
  }
}

NormalizeResult Cosim::canonical(const ExprPtr& e, bool check_types) const {
  NormalizeResult total;
  ExprPtr cur = e;
  for (;;) {
    NormalizeResult n = dict_normalize(cur, kDictNormalizeBound, check_types);
    total.steps += n.steps;
    if (!n.ok()) {
      total.expr = n.expr;
      total.error = n.error;
      total.overflow = n.overflow;
      return total;
    }
    ExprPtr next = consume_erase(n.expr);
    if (next == n.expr) {
      total.expr = next;
      return total;
    }
    cur = next;
  }
}

MacroStepResult Cosim::macro_step(const ExprPtr& d) const {
  Reducer red(*fg_checker_);
  MacroStepResult out;
  ExprPtr cur = d;
  auto fail = [&](const StepOutcome& o) {
    out.expr = cur;
    if (o.kind == StepOutcome::Kind::panic) {
      out.kind = MacroStepResult::Kind::panic;
      out.message = o.panic_message();
    } else if (o.kind == StepOutcome::Kind::value) {
      out.kind = MacroStepResult::Kind::value;
    } else {
      out.kind = MacroStepResult::Kind::stuck;
      out.message = o.reason;
    }
    return out;
  };
  constexpr std::size_t kCap = 100'000;
  for (;;) {
    ExprPtr r = red.find_redex(cur);
    if (!r || classify(r) != RedexClass::erase) break;
    StepOutcome o = red.step(cur);
    if (o.kind != StepOutcome::Kind::stepped) return fail(o);
    cur = o.expr;
    if (++out.erase_steps > kCap) return fail(StepOutcome{});
  }
  ExprPtr r = red.find_redex(cur);
  StepOutcome o = red.step(cur);
  if (o.kind != StepOutcome::Kind::stepped) return fail(o);
  out.rule = o.rule;
  out.rule_class = classify(r);
  cur = o.expr;
  for (;;) {
    ExprPtr s = red.find_redex(cur);
    if (!s || classify(s) != RedexClass::sim) break;
    StepOutcome so = red.step(cur);
    if (so.kind != StepOutcome::Kind::stepped) return fail(so);
    cur = so.expr;
    if (++out.sim_steps > kCap) return fail(StepOutcome{});
  }
  out.kind = MacroStepResult::Kind::stepped;
  out.expr = cur;
  return out;
}

std::size_t Cosim::count_decompositions(const ExprPtr& e) const {
  Reducer red(*fg_checker_);
  // A decomposition E[r]: the hole sits under the first non-value among the strictly
  // evaluated children, and r itself is a redex.
  std::function<std::size_t(const ExprPtr&)> go = [&](const ExprPtr& x) -> std::size_t {
    if (is_value(*x)) return 0;
    std::size_t n = red.is_redex(*x) ? 1 : 0;
    auto kids = children(*x);
    std::size_t k = strict_arity(*x);
    for (std::size_t i = 0; i < k && i < kids.size(); ++i) {
      if (is_value(*kids[i])) continue;
      // A `v != v` condition is contracted together with its if.
      if (!(n == 1 && x->is<ex::If>())) n += go(kids[i]);
      break;
    }
    return n;
  };
  return go(e);
}

ExprPtr Cosim::translate_closed(const ExprPtr& e) { return translator_->translate_closed(e); }

CorrespondenceReport Cosim::check_correspondence(std::size_t max_steps, bool check_types) {
  CorrespondenceReport rep;
  Reducer fgg(*fgg_checker_);
  ExprPtr e = src_.main;
  auto mismatch = [&](std::size_t i, const std::string& why, const ExprPtr& fg_term, const ExprPtr& expected) {
    rep.matched = false;
    if (!rep.mismatch_index) {
      rep.mismatch_index = i;
      rep.mismatch_reason = why;
      rep.fgg_term = print_expr(e);
      rep.fg_term = fg_term ? print_expr(fg_term) : "";
      rep.expected_term = expected ? print_expr(expected) : "";
    }
  };

  NormalizeResult n0 = dict_normalize(translate_closed(e), kDictNormalizeBound, check_types);
  ExprPtr t = n0.expr;
  rep.steps.push_back({0, "", {}, n0.steps, n0.ok()});
  rep.matched = n0.ok();
  if (!n0.ok()) mismatch(0, n0.error, t, nullptr);

  std::size_t i = 0;
  for (;;) {
    if (i >= max_steps) {
      rep.terminal_kind = "budget";
      // The target is in lockstep and has not terminated either.
      rep.both_sides_agree = !is_value(*t);
      break;
    }
    StepOutcome s = fgg.step(e);
    if (s.kind == StepOutcome::Kind::value) {
      rep.terminal_kind = "value";
      ExprPtr want = dict_normalize(translate_closed(e)).expr;
      rep.both_sides_agree = is_value(*t) && equal(t, want);
      // The translated program run on its own must reach the value translation too.
      if (rep.both_sides_agree) {
        RunResult fr = Reducer(*fg_checker_).run(target_->main, kDefaultMaxSteps);
        rep.both_sides_agree = fr.kind == RunResult::Kind::value && equal(fr.value, translate_closed(e));
      }
      if (!rep.both_sides_agree) mismatch(i, "terminal values differ", t, want);
      break;
    }
    MacroStepResult m = macro_step(t);
    if (s.kind == StepOutcome::Kind::panic) {
      rep.terminal_kind = "panic";
      rep.both_sides_agree = m.kind == MacroStepResult::Kind::panic;
      if (!rep.both_sides_agree) mismatch(i, "source panics but target does not", m.expr, nullptr);
      break;
    }
    if (s.kind == StepOutcome::Kind::stuck) {
      rep.terminal_kind = "stuck";
      rep.both_sides_agree = false;
      mismatch(i, "source is stuck: " + s.reason, t, nullptr);
      break;
    }
    ++i;
    StepRecord rec;
    rec.fgg_step_index = i;
    rec.fgg_rule = s.rule;
    rec.macro = {m.erase_steps, m.rule, m.sim_steps};
    e = s.expr;
    if (m.kind != MacroStepResult::Kind::stepped) {
      rec.matched = false;
      rep.steps.push_back(rec);
      rep.terminal_kind = m.kind == MacroStepResult::Kind::panic ? "panic" : "stuck";
      rep.both_sides_agree = false;
      mismatch(i, "target stopped early: " + m.message, m.expr, nullptr);
      break;
    }
    NormalizeResult nt = dict_normalize(m.expr, kDictNormalizeBound, check_types);
    rec.dict_normalization_steps = nt.steps;
    t = nt.expr;
    NormalizeResult ct = nt.ok() ? canonical(t, check_types) : nt;
    NormalizeResult ne = canonical(translate_closed(e));
    rec.matched = ct.ok() && ne.ok() && equal(ct.expr, ne.expr);
    rep.steps.push_back(rec);
    nt = ct;
    if (!rec.matched) {
      mismatch(i, nt.ok() ? (ne.ok() ? "states differ after dictionary resolution" : ne.error) : nt.error,
               nt.expr, ne.expr);
      rep.terminal_kind = "mismatch";
      break;
    }
  }
  if (!rep.mismatch_index) rep.matched = rep.both_sides_agree;
  return rep;
}

std::vector<ExprPtr> Cosim::sample_states(std::size_t max_fgg_steps) {
  std::vector<ExprPtr> out;
  Reducer fgg(*fgg_checker_);
  Reducer fg(*fg_checker_);
  ExprPtr e = src_.main;
  for (std::size_t i = 0; i <= max_fgg_steps; ++i) {
    ExprPtr raw = translate_closed(e);
    out.push_back(raw);
    // Walk the target through one macro-step, keeping every intermediate state.
    ExprPtr cur = dict_normalize(raw).expr;
    MacroStepResult m = macro_step(cur);
    std::size_t budget = m.erase_steps + 1 + m.sim_steps;
    for (std::size_t k = 0; k < budget; ++k) {
      StepOutcome o = fg.step(cur);
      if (o.kind != StepOutcome::Kind::stepped) break;
      cur = o.expr;
      out.push_back(cur);
    }
    StepOutcome s = fgg.step(e);
    if (s.kind != StepOutcome::Kind::stepped) break;
    e = s.expr;
  }
  return out;
}

TrialStats determinism_trials(Cosim& c, const std::vector<ExprPtr>& states, std::size_t n,
                              std::mt19937_64& rng) {
  TrialStats st;
  std::vector<ExprPtr> live;
  for (auto& s : states)
    if (!is_value(*s)) live.push_back(s);
  if (live.empty()) return st;
  std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
  Reducer fg(c.fg_checker());
  for (std::size_t k = 0; k < n; ++k) {
    ExprPtr s = live[pick(rng)];
    ++st.trials;
    MacroStepResult a = c.macro_step(s);
    MacroStepResult b = c.macro_step(s);
    bool ok = a.kind == b.kind && ((!a.expr && !b.expr) || (a.expr && b.expr && equal(a.expr, b.expr)));
    // Every state along the macro-step has exactly one decomposition.
    ExprPtr cur = s;
    std::size_t len = a.erase_steps + 1 + a.sim_steps;
    for (std::size_t j = 0; ok && j < len; ++j) {
      if (c.count_decompositions(cur) != 1) ok = false;
      StepOutcome o = fg.step(cur);
      if (o.kind != StepOutcome::Kind::stepped) break;
      cur = o.expr;
    }
    if (!ok) {
      ++st.counterexamples;
      if (st.first_counterexample.empty()) st.first_counterexample = print_expr(s);
    }
  }
  return st;
}

TrialStats confluence_trials(Cosim& c, const std::vector<ExprPtr>& states, std::size_t n,
                             std::mt19937_64& rng, std::size_t bound) {
  TrialStats st;
  struct Cand {
    ExprPtr e;
    std::vector<Position> ps;
  };
  std::vector<Cand> cands;
  for (auto& s : states) {
    auto ps = c.dict_redex_positions(s);
    if (ps.size() >= 2) cands.push_back({s, std::move(ps)});
  }
  if (cands.empty()) return st;
  std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const Cand& cd = cands[pick(rng)];
    std::uniform_int_distribution<std::size_t> pos(0, cd.ps.size() - 1);
    std::size_t i = pos(rng), j = pos(rng);
    while (j == i) j = pos(rng);
    ++st.trials;
    ExprPtr left = c.contract_dict_at(cd.e, cd.ps[i]);
    ExprPtr right = c.contract_dict_at(cd.e, cd.ps[j]);
    bool ok = left && right;
    if (ok) {
      NormalizeResult l = c.dict_normalize(left, bound), r = c.dict_normalize(right, bound);
      ok = l.ok() && r.ok() && equal(l.expr, r.expr);
    }
    if (!ok) {
      ++st.counterexamples;
      if (st.first_counterexample.empty()) st.first_counterexample = print_expr(cd.e);
    }
  }
  return st;
}

}  // namespace fgg
