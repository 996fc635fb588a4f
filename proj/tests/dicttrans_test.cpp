#include <doctest.h>

#include "fgg/dicttrans.hpp"
#include "fgg/reduce.hpp"
#include "helpers.hpp"

using namespace fgg;

namespace {

DictTranslation tr(const std::string& src, DictOptions o = {}) {
  auto p = testutil::must_parse(src);
  REQUIRE(fgg_typecheck_program(p).empty());
  return translate_program(p, o);
}

const Decl* find_decl(const Program& p, const std::string& name) {
  for (auto& d : p.decls)
    if (!std::holds_alternative<MethodDecl>(d) && decl_name(d) == name) return &d;
  return nullptr;
}

const MethodDecl* find_method(const Program& p, const std::string& type, const std::string& name) {
  for (auto& d : p.decls)
    if (auto* m = std::get_if<MethodDecl>(&d); m && m->receiver_type == type && m->name == name) return m;
  return nullptr;
}

}  // namespace

TEST_SUITE("dicttrans") {

TEST_CASE("name mangling") {
  CHECK(NameMangler::dict_name("Ord") == "OrdDict");
  CHECK(NameMangler::meta_name("int") == "Int_meta");
  CHECK(NameMangler::meta_name("Box") == "Box_meta");
  CHECK(NameMangler::method_ptr_name("int", "Gt") == "Int_Gt");
  CHECK(NameMangler::method_ptr_name("GtFunc", "Apply") == "GtFunc_Apply");
  CHECK(NameMangler::fn_meta_name(3) == "spec_metadata_3");
}

TEST_CASE("type-rep example: main and signature reps") {
  auto t = tr(testutil::corpus("fgg/typerep.fgg"));
  auto& p = t.program;
  auto* seq = p.main->as<ex::Seq>();
  REQUIRE(seq);
  CHECK(print_expr(seq->first) == "Foo_meta{Int_meta{}}.tryCast(Bar{AnyDict{Bool_meta{}}})");
  CHECK(print_expr(seq->rest) == "Foo_meta{Bool_meta{}}.tryCast(Bar{AnyDict{Bool_meta{}}})");
  auto* spec = find_method(p, "Bar", "spec_do");
  REQUIRE(spec);
  CHECK(print_expr(spec->body) == "spec_metadata_3{Any_meta{}, param_index_0{}, this.dict_0._type, Int_meta{}}");
  CHECK(spec->sig.result == Type::named("spec_metadata_3"));
  // erased interface keeps the method and adds its signature rep
  auto* foo = std::get_if<InterfaceDecl>(find_decl(p, "Foo"));
  REQUIRE(foo);
  REQUIRE(foo->specs.size() == 2);
  CHECK(print_signature(foo->specs[0].name, foo->specs[0].sig) == "do(dict_0 AnyDict, a Any, b Any) Any");
  CHECK(print_signature(foo->specs[1].name, foo->specs[1].sig) == "spec_do() spec_metadata_3");
}

TEST_CASE("structs gain dictionary fields and tryCast checks") {
  auto t = tr(testutil::corpus("fgg/list.fgg"));
  auto* gt = std::get_if<StructDecl>(find_decl(t.program, "GtFunc"));
  REQUIRE(gt);
  REQUIRE(gt->fields.size() == 2);
  CHECK(gt->fields[0].type == Type::named("Any"));
  CHECK(gt->fields[1].name == "dict_0");
  CHECK(gt->fields[1].type == Type::named("OrdDict"));
  auto* cast = find_method(t.program, "GtFunc_meta", "tryCast");
  REQUIRE(cast);
  CHECK(print_expr(cast->body).find("this._type_0 != x.(GtFunc).dict_0._type") != std::string::npos);
  CHECK(t.dict_structs.count("OrdDict"));
  CHECK(t.method_ptr_structs.count("Int_Gt"));
  CHECK(t.meta_structs.count("GtFunc_meta"));
}

TEST_CASE("call translation: concrete receivers and dictionary calls") {
  auto t = tr(testutil::corpus("fgg/list.fgg"));
  auto* apply = find_method(t.program, "GtFunc", "Apply");
  REQUIRE(apply);
  // this.val has type T, so Gt goes through the dictionary
  CHECK(print_expr(apply->body) == "this.dict_0.Gt.Apply(this.(GtFunc).val, x)");
  auto* ptr = find_method(t.program, "Int_Gt", "Apply");
  REQUIRE(ptr);
  CHECK(print_expr(ptr->body) == "rec.(int).Gt(arg_0)");
}

TEST_CASE("makeDict cases") {
  std::string src = R"(package main
type Any interface {}
type Eq[T Eq[T]] interface { Equal(x T) bool }
type Ord[T Ord[T]] interface { Equal(x T) bool; Less(x T) bool }
type Num struct { v int }
func (n Num) Equal(x Num) bool { return n.v < x.v }
func (n Num) Less(x Num) bool { return n.v < x.v }
type U struct {}
func (u U) Same[T Eq[T]](a T) T { return a }
func (u U) Pass[T Ord[T]](a T) T { return U{}.Same[T](a) }
func (u U) Keep[T Ord[T]](a T) T { return U{}.Pass[T](a) }
func main() { _ = U{}.Keep[Num](Num{1}) })";
  auto p = testutil::must_parse(src);
  DictTranslator d(p);
  TypeEnv delta{{"T", Type::named("Ord", {Type::param("T")})}};
  DictEnv eta{{"T", var("dict_0")}};
  // (i) same bound: reuse the dictionary
  CHECK(print_expr(d.make_dict(Type::param("T"), Type::named("Ord", {Type::param("T")}), delta, eta)) == "dict_0");
  // (ii) weaker bound: rebuild from the dictionary's fields
  CHECK(print_expr(d.make_dict(Type::param("T"), Type::named("Eq", {Type::param("T")}), delta, eta)) ==
        "EqDict{dict_0.Equal, dict_0._type}");
  // (iii) concrete type: method pointers plus its type-rep
  CHECK(print_expr(d.make_dict(Type::named("Num"), Type::named("Ord", {Type::named("Num")}), {}, {})) ==
        "OrdDict{Num_Equal{}, Num_Less{}, Num_meta{}}");
}

TEST_CASE("output typechecks as FG and re-parses") {
  for (auto& f : testutil::corpus_files("fgg", ".fgg")) {
    CAPTURE(f);
    auto t = tr(testutil::slurp(f));
    CHECK(fg_typecheck_program(t.program, Dialect::fg_extended).empty());
    auto again = testutil::must_parse(pretty_print(t.program), Dialect::fg_extended);
    CHECK(equal(again, t.program));
  }
}

TEST_CASE("identifier collisions are rejected") {
  const char* reserved = "package main\ntype Any interface {}\ntype dict_x struct {}\nfunc main() { _ = 1 }";
  CHECK_THROWS_AS(tr(reserved), CompileError);
  const char* field = "package main\ntype A struct { _type int }\nfunc main() { _ = 1 }";
  CHECK_THROWS_AS(tr(field), CompileError);
  const char* any = "package main\ntype Any interface { M() int }\nfunc main() { _ = 1 }";
  CHECK_THROWS_AS(tr(any), CompileError);
  // A_B{} as a method pointer of A.B collides with a user struct A_B
  const char* mptr = "package main\ntype A struct {}\nfunc (a A) B() int { return 1 }\ntype A_B struct {}\nfunc main() { _ = 1 }";
  CHECK_THROWS_AS(tr(mptr), CompileError);
  const char* dict = "package main\ntype I interface {}\ntype IDict struct {}\nfunc main() { _ = 1 }";
  CHECK_THROWS_AS(tr(dict), CompileError);
}

TEST_CASE("options") {
  auto plain = tr(testutil::corpus("fgg/sum.fgg"));
  auto skip = tr(testutil::corpus("fgg/sum.fgg"), {true, false});
  CHECK(node_count(skip.program) < node_count(plain.program));
  CHECK(fg_typecheck_program(skip.program, Dialect::fg_extended).empty());
  CHECK(print_expr(run(skip.program).value) == "210");

  auto lean = tr(testutil::corpus("fgg/gtfunc.fgg"), {false, true});
  CHECK(lean.meta_structs.empty());
  CHECK(fg_typecheck_program(lean.program, Dialect::fg_extended).empty());
  CHECK(print_expr(run(lean.program).value) == "false");
  CHECK_THROWS_AS(tr(testutil::corpus("fgg/typerep.fgg"), {false, true}), CompileError);
}

TEST_CASE("inventory lists every generated declaration") {
  auto t = tr(testutil::corpus("fgg/gtfunc.fgg"));
  auto j = inventory_json(t.inventory);
  bool saw_dict = false, saw_ptr = false;
  for (auto& e : j) {
    saw_dict = saw_dict || (e["name"] == "OrdDict" && e["role"] == "dictionary");
    saw_ptr = saw_ptr || (e["name"] == "Int_Gt" && e["role"] == "method-pointer");
  }
  CHECK(saw_dict);
  CHECK(saw_ptr);
}

TEST_CASE("value translation") {
  auto p = testutil::must_parse(testutil::corpus("fgg/list.fgg"));
  DictTranslator d(p);
  auto v = testutil::must_parse(testutil::with_main(testutil::corpus("fgg/list.fgg"), "Cons[int]{1, Nil[int]{}}"));
  CHECK(print_expr(d.translate_closed(v.main)) == "Cons{1, Nil{AnyDict{Int_meta{}}}, AnyDict{Int_meta{}}}");
}

}
