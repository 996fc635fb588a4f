#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "fgg/bench.hpp"
#include "fgg/reduce.hpp"
#include "fgg/typecheck.hpp"
#include "helpers.hpp"

using namespace fgg;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

std::string doit_line(const std::string& src) {
  auto at = src.find("DoIt(");
  REQUIRE(at != std::string::npos);
  auto body = src.find("return", at);
  return src.substr(body, src.find('\n', body) - body);
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("generation is deterministic and well typed") {
  for (char f : {'a', 'b', 'c', 'd', 'e'}) {
    CAPTURE(f);
    BenchConfig c{f, 3, 2};
    CHECK(generate_source(c) == generate_source(c));
    auto p = generate(c);
    CHECK(fgg_typecheck_program(p).empty());
    CHECK(run(p).kind == RunResult::Kind::value);
  }
}

TEST_CASE("family shapes") {
  auto a = generate_source({'a', 5, 1});
  CHECK(count_of(a, "g_5()") >= 1);
  CHECK(count_of(a, "g_6()") == 0);
  // k type parameters: one f_1 call per red/blue combination
  auto c = generate_source({'c', 3, 1});
  CHECK(count_of(doit_line(c), "f_1[") == 8);
  auto d = generate_source({'d', 4, 1});
  CHECK(count_of(d, "f_4[") >= 1);
  CHECK(count_of(d, "f_5[") == 0);
  auto e = generate_source({'e', 3, 1});
  CHECK(count_of(e, "f_3[") >= 1);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(validate({'z', 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate({'a', 0, 1}), std::invalid_argument);
  CHECK_NOTHROW(validate({'e', 2, 1}));
}

TEST_CASE("recorded base program") {
  auto src = generate_source({'a', 2, 100});
  CHECK(src == testutil::slurp(std::string(CORPUS_DIR) + "/../bench/base_program.fgg"));
}

TEST_CASE("measurement rows") {
  auto d = measure({'a', 3, 2}, "dict", 10'000'000, true);
  auto e = measure({'a', 3, 2}, "erasure", 10'000'000, true);
  CHECK(d.error == "");
  CHECK(e.error == "");
  CHECK(d.output_nodes > 0);
  CHECK(e.output_nodes <= d.output_nodes);
  CHECK(d.steps > 0);
  CHECK(measure({'a', 3, 2}, "nope", 1000, false).error != "");
}

TEST_CASE("csv output") {
  std::ostringstream empty;
  write_csv(empty, {});
  CHECK(empty.str() == std::string(kMetricsHeader) + "\n");
  std::ostringstream one;
  MetricsRow r;
  r.family = 'b';
  r.param = 4;
  r.translator = "dict";
  r.output_nodes = 10;
  r.steps = 20;
  write_csv(one, {r});
  CHECK(one.str().find("\nb,4,dict,10,20,") != std::string::npos);
}

TEST_CASE("polynomial fit") {
  std::vector<double> x{1, 2, 3, 4, 5}, lin{3, 5, 7, 9, 11}, sq{1, 4, 9, 16, 25};
  CHECK(fit_r2(x, lin, 1) == doctest::Approx(1.0));
  CHECK(fit_r2(x, sq, 2) == doctest::Approx(1.0));
  CHECK(fit_r2(x, sq, 1) < 0.99);
  std::vector<double> noisy{1, 3, 2, 5, 4};
  double r = fit_r2(x, noisy, 1);
  CHECK(r > 0.0);
  CHECK(r < 1.0);
}

}
