#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fgg/cli.hpp"
#include "helpers.hpp"

using namespace fgg;

namespace {

struct Out {
  int code;
  std::string out;
  std::string err;
};

Out fggc(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = dispatch(args, o, e);
  return {code, o.str(), e.str()};
}

std::string tmp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("fggc_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(fggc({}).code == 2);
  CHECK(fggc({"frobnicate"}).code == 2);
  CHECK(fggc({"bench", "--family", "q"}).code == 2);
  CHECK(fggc({"bench", "--family", "a", "--range", "5..2"}).code == 2);
  CHECK(fggc({"translate", "--mode", "mono", testutil::corpus_path("fgg/sum.fgg")}).code == 2);
}

TEST_CASE("typecheck") {
  CHECK(fggc({"typecheck", testutil::corpus_path("fgg/list.fgg")}).code == 0);
  auto bad = fggc({"typecheck", testutil::corpus_path("negative/list_fail.fgg")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("list_fail.fgg:15:") != std::string::npos);
  CHECK(bad.err.find("Function[bool, bool]") != std::string::npos);
  auto js = fggc({"typecheck", "--json", testutil::corpus_path("negative/list_fail.fgg")});
  // one object per line
  auto j = nlohmann::json::parse(js.out.substr(0, js.out.find('\n')));
  CHECK(j["line"] == 15);
  CHECK(j["severity"] == "error");
  CHECK(j["file"] == testutil::corpus_path("negative/list_fail.fgg"));
  CHECK(fggc({"typecheck", "/nonexistent.fgg"}).code == 1);
}

TEST_CASE("parse round trip") {
  auto r = fggc({"parse", testutil::corpus_path("fgg/tree.fgg")});
  REQUIRE(r.code == 0);
  auto again = fggc({"parse", tmp_file("tree.fgg", r.out)});
  CHECK(again.out == r.out);
}

TEST_CASE("run") {
  auto r = fggc({"run", testutil::corpus_path("fgg/sum.fgg")});
  CHECK(r.code == 0);
  CHECK(r.out.find("210") != std::string::npos);
  auto p = fggc({"run", testutil::corpus_path("fg/list.fg")});
  CHECK(p.code == 1);
  CHECK(p.out.find("panic") != std::string::npos);
}

TEST_CASE("translate then run") {
  auto path = tmp_file("sum_dict.fg", "");
  REQUIRE(fggc({"translate", testutil::corpus_path("fgg/sum.fgg"), "-o", path}).code == 0);
  auto r = fggc({"run", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("210") != std::string::npos);
  auto e = fggc({"translate", "--mode", "erasure", testutil::corpus_path("fgg/sum.fgg")});
  CHECK(e.code == 0);
  CHECK(e.out.find("package main") == 0);
  auto w = fggc({"translate", "--mode", "erasure", testutil::corpus_path("fgg/typerep.fgg")});
  CHECK(w.code == 0);
  CHECK(w.err.find("warning") != std::string::npos);
  auto inv = fggc({"translate", "--emit-inventory", testutil::corpus_path("fgg/gtfunc.fgg"), "-o", path});
  CHECK(nlohmann::json::parse(inv.out).is_array());
  CHECK(fggc({"translate", "--no-type-metadata", testutil::corpus_path("fgg/typerep.fgg")}).code == 1);
}

TEST_CASE("cosim") {
  auto r = fggc({"cosim", "--report", "json", testutil::corpus_path("fgg/list.fgg")});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["matched"] == true);
  CHECK(j["terminal"]["kind"] == "value");
}

TEST_CASE("bench") {
  auto r = fggc({"bench", "--family", "a", "--range", "2..3", "--iterations", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("family,param,translator") == 0);
}

}
