#include "fgg/bench.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "fgg/dicttrans.hpp"
#include "fgg/erasure.hpp"
#include "fgg/parser.hpp"
#include "fgg/reduce.hpp"
#include "fgg/typecheck.hpp"

namespace fgg {

void validate(const BenchConfig& c) {
  if (c.family < 'a' || c.family > 'e')
    throw std::invalid_argument(std::string("unknown benchmark family ") + c.family);
  int min = c.family == 'b' ? 1 : 2;
  if (c.param < min)
    throw std::invalid_argument(std::string("family ") + c.family + " needs param >= " + std::to_string(min));
  if (c.iterations < 1) throw std::invalid_argument("iterations must be positive");
}

namespace {

std::string tparams(int k, const char* bound = "Any") {
  std::string s;
  for (int i = 1; i <= k; ++i) s += (i > 1 ? ", T" : "T") + std::to_string(i) + " " + bound;
  return s;
}

std::string targs(int k) {
  std::string s;
  for (int i = 1; i <= k; ++i) s += (i > 1 ? ", T" : "T") + std::to_string(i);
  return s;
}

// Every sequence of Red/Blue of length k, in binary order.
std::vector<std::string> colour_combos(int k) {
  std::vector<std::string> out;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::string s;
    for (int i = k - 1; i >= 0; --i) s += std::string(s.empty() ? "" : ", ") + ((mask >> i) & 1 ? "Blue" : "Red");
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::string generate_source(const BenchConfig& c) {
  validate(c);
  int n = c.family == 'a' ? c.param : 2;   // methods of Base
  int ops = c.family == 'b' ? c.param : 2; // Op calls in Ops
  int k = (c.family == 'c' || c.family == 'e') ? c.param : 2;  // type params of Base
  int chain = (c.family == 'd' || c.family == 'e') ? c.param : 2;

  std::ostringstream o;
  o << "package main;\n";
  o << "type Any interface {};\n";
  o << "type Red struct {};\n";
  o << "type Blue struct {};\n";
  o << "type Num struct {};\n";
  o << "func (x Num) Op(v int) int { return v + 1 };\n";
  std::string body = "v";
  for (int i = 0; i < ops; ++i) body = "x.Op(" + body + ")";
  o << "func (x Num) Ops(v int) int { return " << body << " };\n";

  o << "type Base[" << tparams(k) << "] interface {\n";
  for (int i = 1; i <= n; ++i) o << "\tg_" << i << "() int" << (i < n ? ";\n" : "\n");
  o << "};\n";
  o << "type Derived[" << tparams(k) << "] struct {};\n";
  for (int i = 1; i <= n; ++i)
    o << "func (x Derived[" << targs(k) << "]) g_" << i << "() int { return " << i << " };\n";

  o << "type Prog struct {};\n";
  std::string sum = "acc";
  for (int i = 1; i <= n; ++i) sum += " + x.g_" + std::to_string(i) + "()";
  o << "func (p Prog) CallBase[" << tparams(k) << ", B Base[" << targs(k) << "]](x B, acc int) int {\n"
    << "\treturn Num{}.Ops(" << sum << ")\n};\n";

  std::string base_call = "p.CallBase[" + targs(k) + ", Derived[" + targs(k) + "]](Derived[" + targs(k) + "]{}, acc)";
  if (c.family == 'e') {
    // f_i has i type params and calls f_{i+1} twice, once adding Red and once Blue.
    for (int i = 1; i <= chain; ++i) {
      o << "func (p Prog) f_" << i << "[" << tparams(i) << "](acc int) int {\n\treturn ";
      if (i == chain) {
        o << base_call;
      } else {
        std::string a = targs(i);
        o << "p.f_" << i + 1 << "[" << a << ", Blue](p.f_" << i + 1 << "[" << a << ", Red](acc))";
      }
      o << "\n};\n";
    }
    o << "func (p Prog) DoIt(acc int) int { return p.f_1[Blue](p.f_1[Red](acc)) };\n";
  } else {
    for (int i = 1; i <= chain; ++i) {
      o << "func (p Prog) f_" << i << "[" << tparams(k) << "](acc int) int {\n\treturn ";
      if (i == chain) o << base_call;
      else o << "p.f_" << i + 1 << "[" << targs(k) << "](acc)";
      o << "\n};\n";
    }
    std::string calls = "acc";
    for (auto& combo : colour_combos(k)) calls = "p.f_1[" + combo + "](" + calls + ")";
    o << "func (p Prog) DoIt(acc int) int {\n\treturn " << calls << "\n};\n";
  }

  o << "type Loop struct {};\n";
  o << "func (l Loop) Run(n int, acc int) int {\n"
    << "\tif (n < 1) { return acc };\n"
    << "\treturn l.Run(n - 1, Prog{}.DoIt(acc))\n};\n";
  o << "func main() {\n\t_ = Loop{}.Run(" << c.iterations << ", 0)\n}\n";
  return o.str();
}

Program generate(const BenchConfig& c) {
  ParseResult r = parse_fgg(generate_source(c));
  if (!r.ok()) throw std::logic_error("benchmark generator produced unparsable source: " + r.diagnostics[0].message);
  return std::move(*r.program);
}

MetricsRow measure(const BenchConfig& c, const std::string& translator, std::size_t max_steps,
                   bool check_values) {
  MetricsRow row;
  row.family = c.family;
  row.param = c.param;
  row.translator = translator;
  try {
    Program src = generate(c);
    auto ds = fgg_typecheck_program(src);
    if (!ds.empty()) throw std::runtime_error("generated program does not typecheck: " + ds[0].message);
    auto t0 = std::chrono::steady_clock::now();
    Program out;
    if (translator == "dict") out = translate_program(src).program;
    else if (translator == "erasure") out = erase_program(src).program;
    else throw std::invalid_argument("unknown translator " + translator);
    auto t1 = std::chrono::steady_clock::now();
    row.translate_millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.output_nodes = node_count(out);
    RunResult tr = run(out, max_steps);
    row.steps = tr.steps;
    if (tr.kind != RunResult::Kind::value) {
      row.error = std::string("translated program ended with ") + run_kind_name(tr.kind);
    } else if (check_values) {
      RunResult sr = run(src, max_steps);
      if (sr.kind != RunResult::Kind::value || !equal(sr.value, tr.value)) row.error = "value mismatch";
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<MetricsRow> run_suite(const SuiteSpec& spec) {
  std::vector<MetricsRow> rows;
  for (char f : spec.families)
    for (int p = spec.lo; p <= spec.hi; ++p)
      for (auto& t : spec.translators)
        rows.push_back(measure({f, p, spec.iterations}, t, spec.max_steps, spec.check_values));
  return rows;
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  out << kMetricsHeader << "\n";
  for (auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.translate_millis);
    out << r.family << ',' << r.param << ',' << r.translator << ',' << r.output_nodes << ',' << r.steps << ','
        << ms << ',' << quote(r.error) << "\n";
  }
}

double fit_r2(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size()), m = degree + 1;
  if (x.size() != y.size() || n < m) throw std::invalid_argument("fit_r2: not enough points");
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1;
    for (Eigen::Index j = 0; j < m; ++j, p *= x[i]) a(i, j) = p;
    b(i) = y[i];
  }
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  double ss_res = (a * coef - b).squaredNorm();
  double ss_tot = (b.array() - b.mean()).square().sum();
  return ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

}  // namespace fgg
