#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "torsion/arith.hpp"

namespace torsion::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCacheEnv = "TORSION_PROBE_CACHE";

struct Config {
  double l_tol = 1e-12;
  double scan_resolution = 1e-3;
  double c2 = 0.05;
  double theta = 0.1;
  u64 sieve_cap = 10'000'000'000ull;
  u64 class_group_cap = 10'000'000;
  std::string cache;  // empty: no cache
  std::string format = "jsonl";
  unsigned threads = 1;

  nlohmann::ordered_json to_json() const;
  /// FNV-1a over the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
  /// Throws ParseError if a value is out of range.
  void validate() const;
};

/// Defaults overridden by the optional JSON file.  Throws ParseError or IOError.
Config load_config(const std::optional<std::filesystem::path>& path);
/// Applies a JSON object of overrides (unknown keys are rejected).
void apply_overrides(Config& cfg, const nlohmann::json& j);

/// Writes the report header, then records as CSV rows or JSON lines.
class Emitter {
 public:
  Emitter(std::ostream& out, const Config& cfg, std::string invocation);

  void note(std::string text) { notes_.push_back(std::move(text)); }
  void record(const nlohmann::ordered_json& row);
  /// Pre-rendered CSV block (with its own column line); CSV format only.
  void csv_block(const std::string& text);
  void finish();

 private:
  void header();

  std::ostream& out_;
  const Config& cfg_;
  std::string invocation_;
  std::vector<std::string> notes_;
  bool header_done_ = false;
  std::vector<std::string> columns_;
};

std::string csv_cell(const nlohmann::ordered_json& v);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace torsion::cli
