#pragma once

// Append-only JSONL store of class group structures keyed by discriminant.
// Each record is one line {"disc":..,"divisors":[..],"method":"..","version":N}
// written with a single O_APPEND write, so concurrent readers see a prefix.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "torsion/fields.hpp"

namespace torsion {

inline constexpr int kCacheVersion = 1;

class ClassGroupCache {
 public:
  enum class Mode { ReadOnly, ReadWrite };

  /// ReadWrite creates the file if needed and truncates a corrupted trailing
  /// line (recording a warning).  ReadOnly ignores an incomplete trailing line.
  /// Throws IOError, or VersionMismatch for records of another version.
  explicit ClassGroupCache(std::filesystem::path path, Mode mode = Mode::ReadWrite);

  const std::filesystem::path& path() const { return path_; }
  std::size_t size() const;
  std::optional<ClassGroupStructure> get(i64 disc) const;
  /// Appends one record; a no-op if the discriminant is already stored.
  void put(const ClassGroupStructure& g);
  ClassGroupStructure get_or_compute(i64 disc, u64 cap = kDefaultClassGroupCap);
  const std::vector<std::string>& warnings() const { return warnings_; }

  static std::string encode(const ClassGroupStructure& g);
  /// Throws ParseError for malformed lines, VersionMismatch for other versions.
  static ClassGroupStructure decode(const std::string& line);

 private:
  std::filesystem::path path_;
  Mode mode_;
  mutable std::mutex mutex_;
  std::unordered_map<i64, ClassGroupStructure> index_;
  std::vector<std::string> warnings_;
};

}  // namespace torsion
