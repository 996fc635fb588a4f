#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgg/ast.hpp"
#include "fgg/dicttrans.hpp"
#include "fgg/reduce.hpp"
#include "fgg/typecheck.hpp"

namespace fgg {

enum class RedexClass { erase, sim, dict, ordinary };
const char* redex_class_name(RedexClass c);

inline constexpr std::size_t kDictNormalizeBound = 10'000;

struct NormalizeResult {
  ExprPtr expr;
  std::size_t steps = 0;
  bool overflow = false;
  std::string error;  // typing failure after a ⟶_d step, or overflow
  bool ok() const { return error.empty(); }
};

struct MacroStepResult {
  enum class Kind { stepped, value, panic, stuck };
  Kind kind = Kind::stuck;
  ExprPtr expr;
  std::size_t erase_steps = 0;
  std::string rule;  // rule of the single unrestricted step
  RedexClass rule_class = RedexClass::ordinary;
  std::size_t sim_steps = 0;
  std::string message;
};

struct MacroTrace {
  std::size_t erase_steps = 0;
  std::string rule;
  std::size_t sim_steps = 0;
};

struct StepRecord {
  std::size_t fgg_step_index = 0;
  std::string fgg_rule;
  MacroTrace macro;
  std::size_t dict_normalization_steps = 0;
  bool matched = false;
};

struct CorrespondenceReport {
  std::vector<StepRecord> steps;
  std::string terminal_kind;  // value | panic | budget | stuck
  bool both_sides_agree = false;
  bool matched = false;
  // First divergence, if any.
  std::optional<std::size_t> mismatch_index;
  std::string mismatch_reason;
  std::string fgg_term;
  std::string fg_term;
  std::string expected_term;
};

nlohmann::json report_json(const CorrespondenceReport& r);

// Path of child indices from the root.
using Position = std::vector<std::size_t>;

// Co-simulation of an FGG program with its dictionary-passing translation.
class Cosim {
 public:
  // The program must typecheck as FGG.
  explicit Cosim(const Program& source, DictOptions opts = {});

  const Program& source() const { return src_; }
  const Program& target() const { return *target_; }
  const DictTranslation& translation() const { return translation_; }
  const Checker& fgg_checker() const { return *fgg_checker_; }
  const Checker& fg_checker() const { return *fg_checker_; }

  // Class of a redex found in evaluation position.
  RedexClass classify(const ExprPtr& redex) const;

  // ⟶_d at the root of e, if some dictionary-resolution clause applies there.
  std::optional<ExprPtr> contract_dict(const ExprPtr& e) const;
  std::vector<Position> dict_redex_positions(const ExprPtr& e) const;
  ExprPtr contract_dict_at(const ExprPtr& e, const Position& p) const;
  NormalizeResult dict_normalize(const ExprPtr& e, std::size_t bound = kDictNormalizeBound,
                                 bool check_types = false) const;

  // ⟶_e* in evaluation position.
  ExprPtr consume_erase(const ExprPtr& e) const;
  // Fixpoint of ⟶_d normalisation and ⟶_e* in evaluation position; states are compared
  // in this form.
  NormalizeResult canonical(const ExprPtr& e, bool check_types = false) const;

  // ⟹: ⟶_e* then one ⟶ then ⟶_s* until no sim redex is in evaluation position.
  MacroStepResult macro_step(const ExprPtr& d) const;
  // Number of ways e splits as E[r] with r a redex (0 for values).
  std::size_t count_decompositions(const ExprPtr& e) const;

  // ⟦e⟧ for a closed FGG runtime term.
  ExprPtr translate_closed(const ExprPtr& e);

  CorrespondenceReport check_correspondence(std::size_t max_steps = 500, bool check_types = true);

  // Unnormalised reachable target states for property trials: raw translations of the
  // FGG states and intermediate states of every macro-step.
  std::vector<ExprPtr> sample_states(std::size_t max_fgg_steps);

 private:
  ExprPtr inline_apply(const std::string& ptr, const std::vector<ExprPtr>& args) const;
  ExprPtr norm_rec(const ExprPtr& e, std::size_t& steps, std::size_t bound, bool check_types,
                   std::string& error) const;
  bool is_dict_value_lit(const Expr& e) const;
  bool is_meta_value_lit(const Expr& e) const;

  const Program& src_;
  std::unique_ptr<Checker> fgg_checker_;
  std::unique_ptr<DictTranslator> translator_;
  DictTranslation translation_;
  std::unique_ptr<Program> target_;
  std::unique_ptr<Checker> fg_checker_;
};

struct TrialStats {
  std::size_t trials = 0;
  std::size_t counterexamples = 0;
  std::string first_counterexample;
};

// Random states: ⟹ has exactly one successor and every intermediate state has a
// unique decomposition.
TrialStats determinism_trials(Cosim& c, const std::vector<ExprPtr>& states, std::size_t n,
                              std::mt19937_64& rng);
// Random states with two distinct ⟶_d redexes: contracting either and normalising rejoins.
TrialStats confluence_trials(Cosim& c, const std::vector<ExprPtr>& states, std::size_t n,
                             std::mt19937_64& rng, std::size_t bound = kDictNormalizeBound);

}  // namespace fgg
