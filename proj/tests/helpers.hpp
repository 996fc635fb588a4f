#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgg/parser.hpp"
#include "fgg/printer.hpp"

namespace testutil {

inline std::string corpus_path(const std::string& rel) { return std::string(CORPUS_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& rel) { return slurp(corpus_path(rel)); }

inline std::vector<std::string> corpus_files(const std::string& dir, const std::string& ext) {
  std::vector<std::string> out;
  for (auto& e : std::filesystem::directory_iterator(corpus_path(dir)))
    if (e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline fgg::Program must_parse(const std::string& src, fgg::Dialect d = fgg::Dialect::fgg) {
  auto r = fgg::parse_program(src, d);
  if (!r.ok()) throw std::runtime_error("parse failed: " + r.diagnostics[0].message);
  return std::move(*r.program);
}

// Replaces the body of main.
inline std::string with_main(const std::string& src, const std::string& body) {
  auto at = src.find("func main()");
  if (at == std::string::npos) throw std::runtime_error("no main");
  return src.substr(0, at) + "func main() { _ = " + body + " }\n";
}

}  // namespace testutil
