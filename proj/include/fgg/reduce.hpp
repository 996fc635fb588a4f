#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "fgg/ast.hpp"
#include "fgg/typecheck.hpp"

namespace fgg {

using Value = ExprPtr;

struct StepOutcome {
  enum class Kind { stepped, value, panic, stuck };
  Kind kind = Kind::stuck;
  ExprPtr expr;   // successor (stepped) or the value itself
  ExprPtr redex;  // contracted subterm (stepped, panic)
  std::string rule;
  // Failed assertion; both empty for an explicit panic.
  std::optional<Type> panic_value_type;
  std::optional<Type> panic_target;
  std::string reason;  // stuck

  std::string panic_message() const;
};

struct RunResult {
  enum class Kind { value, panic, budget, stuck };
  Kind kind = Kind::stuck;
  ExprPtr value;  // final value, or the last term reached
  std::string message;
  std::size_t steps = 0;
};

const char* run_kind_name(RunResult::Kind k);

ExprPtr substitute_expr(const ExprPtr& e, const std::map<std::string, ExprPtr>& vars,
                        const TypeSubst& types);

// Left-to-right call-by-value small-step semantics shared by FG(-extended) and FGG.
class Reducer {
 public:
  explicit Reducer(const Checker& checker) : checker_(checker) {}

  StepOutcome step(const ExprPtr& e) const;
  // Subterm that step() would contract; null for values.
  ExprPtr find_redex(const ExprPtr& e) const;
  // Contracts e, which must itself be a redex (its strict children are values).
  StepOutcome contract(const ExprPtr& e) const;
  // e itself is a redex (not a value, strict children already values).
  bool is_redex(const Expr& e) const;

  RunResult run(ExprPtr e, std::size_t max_steps,
                const std::function<void(const StepOutcome&)>& trace = {}) const;

  const Checker& checker() const { return checker_; }

 private:
  const Checker& checker_;
};

inline constexpr std::size_t kDefaultMaxSteps = 1'000'000;

StepOutcome fg_step(const ExprPtr& e, const Checker& decls);
StepOutcome fgg_step(const ExprPtr& e, const Checker& decls);
RunResult run(const Program& p, std::size_t max_steps = kDefaultMaxSteps,
              const std::function<void(const StepOutcome&)>& trace = {});
// Steps to a value or panic; nullopt when the budget runs out.
std::optional<std::size_t> step_count(const Program& p, std::size_t max_steps = kDefaultMaxSteps);

}  // namespace fgg
