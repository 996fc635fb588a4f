#include <doctest.h>

#include "fgg/dicttrans.hpp"
#include "fgg/erasure.hpp"
#include "fgg/reduce.hpp"
#include "helpers.hpp"

using namespace fgg;

namespace {

const MethodDecl* find_method(const Program& p, const std::string& type, const std::string& name) {
  for (auto& d : p.decls)
    if (auto* m = std::get_if<MethodDecl>(&d); m && m->receiver_type == type && m->name == name) return m;
  return nullptr;
}

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

}  // namespace

TEST_SUITE("erasure") {

TEST_CASE("types become Any and uses get assertions") {
  auto p = testutil::must_parse(testutil::corpus("fgg/gtfunc.fgg"));
  auto t = erase_program(p);
  CHECK(t.warnings.empty());
  auto* apply = find_method(t.program, "GtFunc", "Apply");
  REQUIRE(apply);
  CHECK(print_expr(apply->body) == "this.val.(Ord).Gt(in)");
  CHECK(apply->sig.params[0].type == Type::named("Any"));
  CHECK(apply->sig.result == Type::named("Any"));
  auto* gt = find_method(t.program, "int", "Gt");
  REQUIRE(gt);
  CHECK(print_expr(gt->body) == "that.(int) < this");
}

TEST_CASE("field access on a known struct through an interface") {
  std::string src = R"(package main
type Any interface {}
type Foo struct { b Bar }
type Bar struct {}
func (x Bar) Baz() int { return 1 }
type Box[T Any] struct { v T }
func main() { _ = Box[Foo]{Foo{Bar{}}}.v.b.Baz() })";
  auto t = erase_program(testutil::must_parse(src));
  CHECK(print_expr(t.program.main) == "Box{Foo{Bar{}}}.v.(Foo).b.(Bar).Baz()");
  CHECK(fg_typecheck_program(t.program, Dialect::fg_extended).empty());
  CHECK(print_expr(run(t.program).value) == "1");
}

TEST_CASE("results are asserted where a concrete type is needed") {
  std::string src = R"(package main
type Any interface {}
type L[T Any] struct { n int }
func (l L[T]) len() int { return l.n }
func main() { _ = L[bool]{3}.len() + 1 })";
  auto t = erase_program(testutil::must_parse(src));
  CHECK(print_expr(t.program.main) == "L{3}.len().(int) + 1");
}

TEST_CASE("parameter assertions degrade and warn") {
  auto p = testutil::must_parse(testutil::corpus("fgg/assert_param.fgg"));
  auto t = erase_program(p);
  REQUIRE(t.warnings.size() == 1);
  CHECK(t.warnings[0].severity == "warning");
  CHECK(t.warnings[0].line == 5);
  auto* to = find_method(t.program, "Cast", "To");
  REQUIRE(to);
  CHECK(print_expr(to->body) == "x.(Any)");
  CHECK(to->sig.formal.empty());
  // Box[bool] vs Box[int] is no longer distinguished
  CHECK(run(p).kind == RunResult::Kind::panic);
  CHECK(run(t.program).kind == RunResult::Kind::value);
}

TEST_CASE("typerep fixture diverges under erasure") {
  auto p = testutil::must_parse(testutil::corpus("fgg/typerep.fgg"));
  auto t = erase_program(p);
  CHECK(run(p).kind == RunResult::Kind::panic);
  CHECK(run(t.program).kind == RunResult::Kind::value);
  CHECK(print_expr(t.program.main) == "{ Bar{}.(Foo); return Bar{}.(Foo) }");
}

TEST_CASE("value preservation on assertion-free programs") {
  int checked = 0;
  for (auto& f : testutil::corpus_files("fgg", ".fgg")) {
    auto p = testutil::must_parse(testutil::slurp(f));
    if (program_has_assert(p)) continue;
    CAPTURE(f);
    auto t = erase_program(p);
    CHECK(fg_typecheck_program(t.program, Dialect::fg_extended).empty());
    auto a = run(p, 1'000'000), b = run(t.program, 1'000'000);
    CHECK(run_kind_name(a.kind) == std::string(run_kind_name(b.kind)));
    if (a.kind == RunResult::Kind::value) CHECK(equal(erase_value(a.value), b.value));
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("erased output is never larger than the dictionary output") {
  for (auto& f : testutil::corpus_files("fgg", ".fgg")) {
    CAPTURE(f);
    auto p = testutil::must_parse(testutil::slurp(f));
    CHECK(node_count(erase_program(p).program) <= node_count(translate_program(p).program));
  }
}

TEST_CASE("conflicting Any is rejected") {
  auto p = testutil::must_parse("package main\ntype Any struct {}\nfunc main() { _ = Any{} }");
  CHECK_THROWS_AS(erase_program(p), CompileError);
}

TEST_CASE("erase_value") {
  auto p = testutil::must_parse(testutil::corpus("fgg/box.fgg"));
  auto v = run(p).value;
  CHECK(print_expr(erase_value(v)) == "Box{Box{Box{Box{0}}}}");
}

}
