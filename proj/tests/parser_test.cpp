#include <doctest.h>

#include "fgg/parser.hpp"
#include "fgg/printer.hpp"
#include "helpers.hpp"

using namespace fgg;

TEST_SUITE("parser") {

TEST_CASE("FGG declarations and generic types") {
  auto p = testutil::must_parse(R"(package main
type Any interface {}
type Box[T Any] struct { value T }
func (b Box[T]) Get() T { return b.value }
func main() { _ = Box[int]{3}.Get() })");
  REQUIRE(p.decls.size() == 3);
  auto& s = std::get<StructDecl>(p.decls[1]);
  CHECK(s.name == "Box");
  REQUIRE(s.formal.size() == 1);
  CHECK(s.formal[0].bound == Type::named("Any"));
  CHECK(s.fields[0].type == Type::param("T"));
  auto& m = std::get<MethodDecl>(p.decls[2]);
  CHECK(m.receiver_params == std::vector<std::string>{"T"});
  CHECK(m.sig.result == Type::param("T"));
  CHECK(print_expr(p.main) == "Box[int]{3}.Get()");
}

TEST_CASE("F-bounds may mention later parameters of the same formal") {
  auto r = parse_fgg(R"(package main
type Edge[N Node[N, E], E Edge[N, E]] interface { Target() N }
type Node[N Node[N, E], E Edge[N, E]] interface { Out() E }
func main() { _ = 1 })");
  REQUIRE(r.ok());
  auto& e = std::get<InterfaceDecl>(r.program->decls[0]);
  CHECK(e.formal[0].bound.args[1] == Type::param("E"));
}

TEST_CASE("diagnostics carry line and column") {
  auto r = parse_fgg("package main\ntype A struct {\n  x int\n}\nfunc main() { _ = A{1}. }\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].line == 5);
  CHECK(r.diagnostics[0].column > 1);
  CHECK(format_diagnostic("t.fgg", r.diagnostics[0]).rfind("t.fgg:5:", 0) == 0);
}

TEST_CASE("missing package clause is an error") {
  auto r = parse_fgg("func main() { _ = 1 }");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].message.find("package main") != std::string::npos);
}

TEST_CASE("recovery reports more than one error") {
  auto r = parse_fgg("package main\ntype A struct { x }\ntype B struct { y }\nfunc main() { _ = 1 }\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.size() >= 2);
}

TEST_CASE("core FG rejects extended forms and type parameters") {
  auto ext = parse_fg("package main\nfunc main() { _ = 1 + 2 }", false);
  CHECK_FALSE(ext.ok());
  CHECK(parse_fg("package main\nfunc main() { _ = 1 + 2 }", true).ok());
  auto generic = parse_fg("package main\ntype Any interface {}\ntype B[T Any] struct {}\nfunc main() { _ = 1 }", true);
  CHECK_FALSE(generic.ok());
  CHECK(parse_fg("package main\nfunc main() { _ = 1 < 2 }", false).ok());
}

TEST_CASE("comments, newlines inside chains and unicode identifiers") {
  auto p = testutil::must_parse(R"(package main
/* block
   comment */
type Any interface {}
type Box[α Any] struct { value α } // trailing
func main() {
    _ = Box[int]{1}
    .value
})");
  CHECK(print_expr(p.main) == "Box[int]{1}.value");
}

TEST_CASE("statements fold into sequencing and ifs") {
  auto p = testutil::must_parse(R"(package main
type Any interface {}
type C struct {}
func (c C) F(n int) int {
  if (n < 1) { return 0 };
  _ = c;
  return n - 1
}
func main() { _ = C{}.F(2) })");
  auto& m = std::get<MethodDecl>(p.decls[2]);
  auto* i = m.body->as<ex::If>();
  REQUIRE(i);
  CHECK(i->else_branch->is<ex::Seq>());
}

TEST_CASE("printing is a fixpoint of parsing") {
  for (auto& f : testutil::corpus_files("fgg", ".fgg")) {
    CAPTURE(f);
    auto a = testutil::must_parse(testutil::slurp(f));
    std::string once = pretty_print(a);
    auto b = testutil::must_parse(once);
    CHECK(equal(a, b));
    CHECK(pretty_print(b) == once);
  }
}

TEST_CASE("operator precedence survives printing") {
  auto p = testutil::must_parse("package main\nfunc main() { _ = 1 + 2 - 3 < 4 - (5 - 6) }", Dialect::fgg);
  auto q = testutil::must_parse(pretty_print(p), Dialect::fgg);
  CHECK(equal(p.main, q.main));
  auto* b = p.main->as<ex::Binary>();
  REQUIRE(b);
  CHECK(b->op == BinaryOp::lt);
}

}
