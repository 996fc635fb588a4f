#include "fgg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fgg/bench.hpp"
#include "fgg/cosim.hpp"
#include "fgg/dicttrans.hpp"
#include "fgg/erasure.hpp"
#include "fgg/parser.hpp"
#include "fgg/printer.hpp"
#include "fgg/reduce.hpp"
#include "fgg/typecheck.hpp"

namespace fgg {

namespace {

using nlohmann::json;

struct Loaded {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

Dialect pick_dialect(const std::string& path, const std::string& lang, bool core) {
  std::string l = lang;
  if (l.empty()) l = (path.size() >= 4 && path.substr(path.size() - 4) == ".fgg") ? "fgg" : "fg";
  if (l == "fgg") return Dialect::fgg;
  return core ? Dialect::fg : Dialect::fg_extended;
}

void report(const std::string& file, const std::vector<Diagnostic>& ds, bool as_json,
            std::ostream& out, std::ostream& err) {
  for (auto& d : ds) {
    if (as_json)
      out << json{{"file", file}, {"line", d.line}, {"column", d.column},
                  {"severity", d.severity}, {"message", d.message}}.dump()
          << "\n";
    else
      err << format_diagnostic(file, d) << "\n";
  }
}

struct Common {
  std::string file;
  std::string lang;
  bool core = false;
  bool json_out = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "input program")->required();
  sub->add_option("--lang", c.lang, "fg or fgg (default: by extension)")
      ->check(CLI::IsMember({"fg", "fgg"}));
  sub->add_flag("--core", c.core, "restrict FG input to the core dialect");
  sub->add_flag("--json", c.json_out, "machine-readable diagnostics");
}

// Parse and typecheck; prints diagnostics. Returns nullopt on failure.
std::optional<Program> load(const Common& c, bool typecheck, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_file(c.file, text)) {
    report(c.file, {Diagnostic{"cannot read file", 1, 1}}, c.json_out, out, err);
    return std::nullopt;
  }
  Dialect d = pick_dialect(c.file, c.lang, c.core);
  ParseResult r = parse_program(text, d);
  if (!r.ok()) {
    report(c.file, r.diagnostics, c.json_out, out, err);
    return std::nullopt;
  }
  if (typecheck) {
    auto ds = d == Dialect::fgg ? fgg_typecheck_program(*r.program)
                                : fg_typecheck_program(*r.program, d);
    if (!ds.empty()) {
      report(c.file, ds, c.json_out, out, err);
      return std::nullopt;
    }
  }
  return std::move(r.program);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"FG/FGG toolchain", "fggc"};
  app.require_subcommand(1);

  Common parse_opts;
  auto* parse_cmd = app.add_subcommand("parse", "parse and pretty-print a program");
  add_common(parse_cmd, parse_opts);

  Common check_opts;
  auto* check_cmd = app.add_subcommand("typecheck", "typecheck a program");
  add_common(check_cmd, check_opts);

  Common run_opts;
  std::size_t max_steps = kDefaultMaxSteps;
  bool trace = false;
  auto* run_cmd = app.add_subcommand("run", "evaluate main");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--max-steps", max_steps, "step budget");
  run_cmd->add_flag("--trace", trace, "print each reduction step");

  Common tr_opts;
  std::string mode = "dict";
  std::string out_path;
  DictOptions dict_opts;
  bool inventory = false;
  auto* tr_cmd = app.add_subcommand("translate", "translate FGG to FG");
  add_common(tr_cmd, tr_opts);
  tr_cmd->add_option("--mode", mode, "dict or erasure")->check(CLI::IsMember({"dict", "erasure"}));
  tr_cmd->add_option("-o", out_path, "output file (default: stdout)");
  tr_cmd->add_flag("--skip-redundant-asserts", dict_opts.skip_redundant_asserts,
                   "omit assertions whose operand already has the target type");
  tr_cmd->add_flag("--no-type-metadata", dict_opts.no_type_metadata,
                   "omit type-reps (rejects programs with type assertions)");
  tr_cmd->add_flag("--emit-inventory", inventory, "print the generated-declaration manifest as JSON");

  Common cosim_opts;
  std::size_t cosim_steps = 500;
  std::string report_fmt;
  auto* cosim_cmd = app.add_subcommand("cosim", "check step-wise correspondence with the dictionary translation");
  add_common(cosim_cmd, cosim_opts);
  cosim_cmd->add_option("--steps", cosim_steps, "bound on source steps");
  cosim_cmd->add_option("--report", report_fmt, "report format")->check(CLI::IsMember({"json"}));

  std::string families = "a";
  std::string range = "2..2";
  std::string bench_modes = "dict,erasure";
  std::string bench_out;
  int iterations = 100;
  bool emit_source = false;
  auto* bench_cmd = app.add_subcommand("bench", "generate benchmark programs and collect metrics");
  bench_cmd->add_option("--family", families, "families a..e, comma separated");
  bench_cmd->add_option("--range", range, "parameter range LO..HI");
  bench_cmd->add_option("--mode", bench_modes, "translators, comma separated (dict, erasure)");
  bench_cmd->add_option("--out", bench_out, "CSV output file (default: stdout)");
  bench_cmd->add_option("--iterations", iterations, "DoIt repetitions in main")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--emit-source", emit_source, "print the generated FGG program for each parameter instead");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if (*parse_cmd) {
    auto p = load(parse_opts, false, out, err);
    if (!p) return 1;
    out << pretty_print(*p);
    return 0;
  }
  if (*check_cmd) {
    auto p = load(check_opts, true, out, err);
    if (!p) return 1;
    if (!check_opts.json_out) out << "ok\n";
    return 0;
  }
  if (*run_cmd) {
    auto p = load(run_opts, true, out, err);
    if (!p) return 1;
    Checker checker(*p);
    Reducer reducer(checker);
    std::function<void(const StepOutcome&)> tracer;
    if (trace)
      tracer = [&](const StepOutcome& o) {
        if (o.redex) out << o.rule << ": " << print_expr(o.redex) << "\n";
      };
    RunResult r = reducer.run(p->main, max_steps, tracer);
    switch (r.kind) {
      case RunResult::Kind::value:
        out << print_expr(r.value) << "\n";
        return 0;
      case RunResult::Kind::panic:
        out << "panic: " << r.message << "\n";
        return 1;
      default:
        out << run_kind_name(r.kind) << ": " << r.message << "\n";
        return 1;
    }
  }
  if (*tr_cmd) {
    if (tr_opts.lang.empty()) tr_opts.lang = "fgg";
    auto p = load(tr_opts, true, out, err);
    if (!p) return 1;
    Program result;
    std::vector<InventoryEntry> inv;
    try {
      if (mode == "dict") {
        DictTranslation t = translate_program(*p, dict_opts);
        result = std::move(t.program);
        inv = std::move(t.inventory);
      } else {
        ErasureTranslation t = erase_program(*p);
        for (auto& w : t.warnings) report(tr_opts.file, {w}, tr_opts.json_out, out, err);
        result = std::move(t.program);
      }
    } catch (const CompileError& e) {
      report(tr_opts.file, {e.diagnostic()}, tr_opts.json_out, out, err);
      return 1;
    }
    std::string text = pretty_print(result);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) {
        err << out_path << ": cannot write\n";
        return 1;
      }
      f << text;
    }
    if (inventory) out << inventory_json(inv).dump(2) << "\n";
    return 0;
  }
  if (*cosim_cmd) {
    if (cosim_opts.lang.empty()) cosim_opts.lang = "fgg";
    auto p = load(cosim_opts, true, out, err);
    if (!p) return 1;
    try {
      Cosim cs(*p);
      CorrespondenceReport r = cs.check_correspondence(cosim_steps);
      if (report_fmt == "json") {
        out << report_json(r).dump(2) << "\n";
      } else {
        out << (r.matched ? "matched" : "MISMATCH") << ": " << r.steps.size() << " records, terminal "
            << r.terminal_kind << (r.both_sides_agree ? " (agree)" : " (disagree)") << "\n";
        if (r.mismatch_index)
          out << "first divergence at step " << *r.mismatch_index << ": " << r.mismatch_reason
              << "\n  source:   " << r.fgg_term << "\n  target:   " << r.fg_term
              << "\n  expected: " << r.expected_term << "\n";
      }
      return r.matched ? 0 : 1;
    } catch (const CompileError& e) {
      report(cosim_opts.file, {e.diagnostic()}, cosim_opts.json_out, out, err);
      return 1;
    }
  }
  if (*bench_cmd) {
    SuiteSpec spec;
    spec.iterations = iterations;
    spec.translators.clear();
    auto split = [](const std::string& s) {
      std::vector<std::string> out;
      std::stringstream ss(s);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
      return out;
    };
    for (auto& f : split(families)) {
      if (f.size() != 1 || f[0] < 'a' || f[0] > 'e') {
        err << "error: --family expects letters a..e, got " << f << "\n";
        return 2;
      }
      spec.families.push_back(f[0]);
    }
    for (auto& m : split(bench_modes)) {
      if (m != "dict" && m != "erasure") {
        err << "error: --mode expects dict and/or erasure, got " << m << "\n";
        return 2;
      }
      spec.translators.push_back(m);
    }
    auto dots = range.find("..");
    try {
      if (dots == std::string::npos) {
        spec.lo = spec.hi = std::stoi(range);
      } else {
        spec.lo = std::stoi(range.substr(0, dots));
        spec.hi = std::stoi(range.substr(dots + 2));
      }
    } catch (const std::exception&) {
      err << "error: --range expects LO..HI\n";
      return 2;
    }
    if (spec.lo > spec.hi) {
      err << "error: empty --range " << range << "\n";
      return 2;
    }
    try {
      for (char f : spec.families)
        for (int p = spec.lo; p <= spec.hi; ++p) validate({f, p, spec.iterations});
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    if (emit_source) {
      for (char f : spec.families)
        for (int p = spec.lo; p <= spec.hi; ++p) out << generate_source({f, p, spec.iterations});
      return 0;
    }
    std::vector<MetricsRow> rows = run_suite(spec);
    if (bench_out.empty()) {
      write_csv(out, rows);
    } else {
      std::ofstream f(bench_out);
      if (!f) {
        err << bench_out << ": cannot write\n";
        return 1;
      }
      write_csv(f, rows);
    }
    bool failed = false;
    for (auto& r : rows) failed = failed || !r.error.empty();
    return failed ? 1 : 0;
  }
  return 2;
}

}  // namespace fgg
