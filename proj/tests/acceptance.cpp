// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is nonzero if
// any selected criterion fails.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "fgg/bench.hpp"
#include "fgg/cosim.hpp"
#include "fgg/dicttrans.hpp"
#include "fgg/erasure.hpp"
#include "fgg/reduce.hpp"
#include "fgg/typecheck.hpp"
#include "helpers.hpp"

using namespace fgg;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream why;
  void fail(const std::string& s) {
    if (ok) why << s;
    ok = false;
  }
};

std::string squash(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

std::vector<std::string> fgg_corpus() { return testutil::corpus_files("fgg", ".fgg"); }

bool has_assert(const Expr& e) {
  if (e.is<ex::Assert>()) return true;
  for (auto& k : children(e))
    if (has_assert(*k)) return true;
  return false;
}

bool program_has_assert(const Program& p) {
  for (auto& d : p.decls)
    if (auto* m = std::get_if<MethodDecl>(&d); m && has_assert(*m->body)) return true;
  return has_assert(*p.main);
}

// Runs the source and its dictionary translation; values must match the value translation.
void check_preservation(const Program& p, const std::string& label, Verdict& v) {
  auto t = translate_program(p);
  auto ds = fg_typecheck_program(t.program, Dialect::fg_extended);
  if (!ds.empty()) return v.fail(label + ": translation rejected: " + ds[0].message);
  auto a = run(p, 1'000'000), b = run(t.program, 1'000'000);
  if (a.kind != b.kind)
    return v.fail(label + ": source " + run_kind_name(a.kind) + ", target " + run_kind_name(b.kind));
  if (a.kind == RunResult::Kind::value) {
    DictTranslator d(p);
    auto expect = d.translate_closed(a.value);
    if (!equal(expect, b.value))
      v.fail(label + ": value " + print_expr(b.value) + " differs from " + print_expr(expect));
  }
}

// 1. Both list programs typecheck; the second Map is rejected.
void c1(Verdict& v) {
  auto fg = testutil::must_parse(testutil::corpus("fg/list.fg"), Dialect::fg_extended);
  if (!fg_typecheck_program(fg, Dialect::fg_extended).empty()) v.fail("FG list rejected");
  std::string src = testutil::corpus("negative/list_fail.fgg");
  auto bad = fgg_typecheck_program(testutil::must_parse(src));
  if (bad.size() != 1) return v.fail("expected one diagnostic, got " + std::to_string(bad.size()));
  if (squash(bad[0].message).find("Function[bool,bool]") == std::string::npos)
    v.fail("diagnostic does not name Function[bool,bool]: " + bad[0].message);
  // drop the offending line and the list typechecks
  std::istringstream in(src);
  std::string line, kept;
  for (int n = 1; std::getline(in, line); ++n)
    if (n != bad[0].line) kept += line + "\n";
  auto ok = fgg_typecheck_program(testutil::must_parse(kept));
  if (!ok.empty()) v.fail("FGG list without line " + std::to_string(bad[0].line) + " rejected: " + ok[0].message);
}

// 2. FG list panics at the second Map; FGG version is static.
void c2(Verdict& v) {
  auto fg = testutil::must_parse(testutil::corpus("fg/list.fg"), Dialect::fg_extended);
  bool second_map = false, after = false;
  auto r = run(fg, 1'000'000, [&](const StepOutcome& s) {
    auto* c = s.redex ? s.redex->as<ex::Call>() : nullptr;
    if (c && c->method == "Map" && s.rule == "r-call") {
      auto* recv = c->receiver->as<ex::StructLit>();
      if (recv && recv->type.name == "Cons" && recv->fields[0]->is<ex::BoolLit>()) second_map = true;
    }
    if (second_map) after = true;
  });
  if (r.kind != RunResult::Kind::panic) v.fail(std::string("FG list ended with ") + run_kind_name(r.kind));
  if (r.message != "Unable to assert bool as type Ord") v.fail("panic message: " + r.message);
  if (!second_map || !after) v.fail("panic not reached inside the second Map");
  auto p = testutil::must_parse(testutil::corpus("negative/list_fail.fgg"));
  if (fgg_typecheck_program(p).empty()) v.fail("FGG list accepted");
}

// 3. Dictionary translation over the corpus.
void c3(Verdict& v) {
  auto files = fgg_corpus();
  if (files.size() < 20) v.fail("corpus has " + std::to_string(files.size()) + " programs");
  for (auto& f : files) check_preservation(testutil::must_parse(testutil::slurp(f)), f, v);

  std::string rep = testutil::corpus("fgg/typerep.fgg");
  for (auto [target, panics] : {std::pair{"Foo[bool]", true}, std::pair{"Foo[int]", false}}) {
    auto p = testutil::must_parse(testutil::with_main(rep, std::string("Bar[bool]{}.(") + target + ")"));
    auto a = run(p), b = run(translate_program(p).program);
    if ((a.kind == RunResult::Kind::panic) != panics) v.fail(std::string("source disagrees on ") + target);
    if ((b.kind == RunResult::Kind::panic) != panics) v.fail(std::string("translation disagrees on ") + target);
  }

  // every assertion fixture: panic-vs-value agreement (checked by check_preservation too)
  int fixtures = 0;
  for (auto& f : files) {
    auto p = testutil::must_parse(testutil::slurp(f));
    if (!program_has_assert(p)) continue;
    ++fixtures;
    auto a = run(p), b = run(translate_program(p).program);
    if ((a.kind == RunResult::Kind::panic) != (b.kind == RunResult::Kind::panic)) v.fail(f + ": panic disagreement");
  }
  if (fixtures < 4) v.fail("too few assertion fixtures");
}

// 4. Step-wise correspondence.
void c4(Verdict& v) {
  for (auto& f : fgg_corpus()) {
    auto p = testutil::must_parse(testutil::slurp(f));
    Cosim c(p);
    auto r = c.check_correspondence(500);
    if (!r.matched) {
      v.fail(f + ": step " + std::to_string(r.mismatch_index.value_or(0)) + ": " + r.mismatch_reason);
      continue;
    }
    for (auto& s : r.steps)
      if (!s.matched) v.fail(f + ": unmatched step record");
  }
}

// 5. Determinism and confluence trials.
void c5(Verdict& v) {
  struct Item {
    std::unique_ptr<Program> p;
    std::unique_ptr<Cosim> c;
    std::vector<ExprPtr> states;
    bool det = true, conf = true;
  };
  std::vector<Item> items;
  for (auto& f : fgg_corpus()) {
    Item it;
    it.p = std::make_unique<Program>(testutil::must_parse(testutil::slurp(f)));
    it.c = std::make_unique<Cosim>(*it.p);
    it.states = it.c->sample_states(200);
    items.push_back(std::move(it));
  }
  std::mt19937_64 rng(20261019);
  auto drive = [&](bool det) {
    TrialStats total;
    for (std::size_t k = 0; total.trials < 1000; ++k) {
      bool any = false;
      for (auto& it : items) {
        if (total.trials >= 1000) break;
        bool& live = det ? it.det : it.conf;
        if (!live) continue;
        TrialStats s = det ? determinism_trials(*it.c, it.states, 1, rng)
                           : confluence_trials(*it.c, it.states, 1, rng);
        if (s.trials == 0) {
          live = false;
          continue;
        }
        any = true;
        total.trials += s.trials;
        total.counterexamples += s.counterexamples;
        if (total.first_counterexample.empty()) total.first_counterexample = s.first_counterexample;
      }
      if (!any) break;
    }
    return total;
  };
  TrialStats d = drive(true), c = drive(false);
  std::printf("  determinism: %zu trials, %zu counterexamples\n", d.trials, d.counterexamples);
  std::printf("  confluence:  %zu trials, %zu counterexamples\n", c.trials, c.counterexamples);
  if (d.trials < 1000 || c.trials < 1000) v.fail("fewer than 1000 trials");
  if (d.counterexamples) v.fail("determinism: " + d.first_counterexample);
  if (c.counterexamples) v.fail("confluence: " + c.first_counterexample);
}

// 6. Polymorphic recursion.
void c6(Verdict& v) {
  std::string src = testutil::corpus("fgg/box.fgg");
  for (int k = 0; k <= 5; ++k)
    check_preservation(testutil::must_parse(testutil::with_main(src, "Box[int]{0}.Nest(" + std::to_string(k) + ")")),
                       "Nest(" + std::to_string(k) + ")", v);
}

// 7. Erasure: divergence on type-reps, preservation elsewhere.
void c7(Verdict& v) {
  auto rep = testutil::must_parse(testutil::corpus("fgg/typerep.fgg"));
  auto er = erase_program(rep);
  if (run(rep).kind != RunResult::Kind::panic) v.fail("typerep source did not panic");
  if (run(er.program).kind != RunResult::Kind::value) v.fail("erased typerep did not diverge from the source");
  if (er.warnings.empty()) v.fail("no erasure warning");
  int n = 0;
  for (auto& f : fgg_corpus()) {
    auto p = testutil::must_parse(testutil::slurp(f));
    if (program_has_assert(p)) continue;
    ++n;
    auto t = erase_program(p);
    if (!fg_typecheck_program(t.program, Dialect::fg_extended).empty()) v.fail(f + ": erasure rejected");
    auto a = run(p, 1'000'000), b = run(t.program, 1'000'000);
    if (a.kind != b.kind) v.fail(f + ": outcome differs after erasure");
    else if (a.kind == RunResult::Kind::value && !equal(erase_value(a.value), b.value))
      v.fail(f + ": erased value differs");
  }
  if (n == 0) v.fail("no assertion-free programs");
}

// 8. Bench growth fits.
void c8(Verdict& v) {
  auto fit = [&](char fam, int lo, int hi, int degree) {
    SuiteSpec s;
    s.families = {fam};
    s.lo = lo;
    s.hi = hi;
    s.iterations = 2;
    auto rows = run_suite(s);
    std::vector<double> x, y;
    std::map<int, std::size_t> dict, erase;
    for (auto& r : rows) {
      if (!r.error.empty()) v.fail(std::string(1, fam) + std::to_string(r.param) + ": " + r.error);
      (r.translator == "dict" ? dict : erase)[r.param] = r.output_nodes;
    }
    for (auto& [p, n] : dict) {
      x.push_back(p);
      y.push_back(double(n));
      if (erase.count(p) && erase[p] > n) v.fail(std::string(1, fam) + std::to_string(p) + ": erasure larger than dict");
    }
    double r2 = fit_r2(x, y, degree);
    std::printf("  family %c, %d..%d, degree %d: R^2 = %.6f\n", fam, lo, hi, degree, r2);
    if (r2 < 0.99) v.fail(std::string("family ") + fam + " fit below 0.99");
  };
  fit('a', 2, 40, 1);
  fit('d', 2, 20, 1);
  fit('e', 2, 9, 2);
}

// 9. Printer/parser round trip.
void c9(Verdict& v) {
  auto round = [&](const Program& p, Dialect d, const std::string& label) {
    auto r = parse_program(pretty_print(p), d);
    if (!r.ok()) return v.fail(label + ": reparse failed: " + r.diagnostics[0].message);
    if (!equal(*r.program, p)) v.fail(label + ": tree changed");
  };
  int n = 0;
  for (auto& f : fgg_corpus()) {
    auto p = testutil::must_parse(testutil::slurp(f));
    round(p, Dialect::fgg, f);
    round(translate_program(p).program, Dialect::fg_extended, f + " (dict)");
    round(erase_program(p).program, Dialect::fg_extended, f + " (erasure)");
    n += 3;
  }
  for (auto& f : testutil::corpus_files("fg", ".fg")) {
    round(testutil::must_parse(testutil::slurp(f), Dialect::fg_extended), Dialect::fg_extended, f);
    ++n;
  }
  std::printf("  %d trees\n", n);
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Verdict&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion");
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> all{
      {1, "list programs typecheck, bad Map rejected", 1, c1},
      {2, "FG list panics at second Map, FGG rejects statically", 1, c2},
      {3, "dictionary translation typechecks and preserves values", 30, c3},
      {4, "step-wise correspondence over the corpus", 60, c4},
      {5, "macro-step determinism and dictionary confluence", 300, c5},
      {6, "polymorphic recursion Nest(0..5)", 5, c6},
      {7, "erasure diverges on type-reps, preserves values otherwise", 30, c7},
      {8, "bench node-count fits", 120, c8},
      {9, "parse of pretty-print is the identity", 30, c9},
  };
  int failed = 0, ran = 0;
  for (auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) v.fail("took " + std::to_string(secs) + " s");
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                v.ok ? "" : ": ", v.why.str().c_str());
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed ? 1 : 0;
}
