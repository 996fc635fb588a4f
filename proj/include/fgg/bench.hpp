#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fgg/ast.hpp"

namespace fgg {

struct BenchConfig {
  char family = 'a';  // a..e
  int param = 2;
  int iterations = 100;
};

// Throws std::invalid_argument for an unknown family or a parameter below its minimum.
void validate(const BenchConfig& c);

// FGG source text of the benchmark program; deterministic in the config.
std::string generate_source(const BenchConfig& c);
// Parsed form of generate_source.
Program generate(const BenchConfig& c);

struct MetricsRow {
  char family = 'a';
  int param = 0;
  std::string translator;  // dict | erasure
  std::size_t output_nodes = 0;
  std::size_t steps = 0;
  double translate_millis = 0;
  std::string error;
};

struct SuiteSpec {
  std::vector<char> families;
  int lo = 2;
  int hi = 2;
  std::vector<std::string> translators{"dict", "erasure"};
  int iterations = 100;
  std::size_t max_steps = 10'000'000;
  // Also run the source and compare values (slower).
  bool check_values = true;
};

MetricsRow measure(const BenchConfig& c, const std::string& translator, std::size_t max_steps,
                   bool check_values);
std::vector<MetricsRow> run_suite(const SuiteSpec& spec);

inline constexpr const char* kMetricsHeader =
    "family,param,translator,output_nodes,steps,translate_millis,error";
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

// Least-squares polynomial fit of the given degree; returns R².
double fit_r2(const std::vector<double>& x, const std::vector<double>& y, int degree);

}  // namespace fgg
