#include "torsion/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "torsion/error.hpp"

namespace torsion {

namespace {

std::string io_message(const std::string& what, const std::filesystem::path& p) {
  return what + " " + p.string() + ": " + std::strerror(errno);
}

}  // namespace

std::string ClassGroupCache::encode(const ClassGroupStructure& g) {
  nlohmann::ordered_json j;
  j["disc"] = g.discriminant;
  j["divisors"] = g.divisors;
  j["method"] = std::string(method_name(g.method));
  j["version"] = kCacheVersion;
  return j.dump();
}

ClassGroupStructure ClassGroupCache::decode(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("cache record: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != kCacheVersion) {
      throw Error(Errc::VersionMismatch, "cache record version " + std::to_string(version) + ", expected " +
                                             std::to_string(kCacheVersion));
    }
    ClassGroupStructure g;
    g.discriminant = j.at("disc").get<i64>();
    g.divisors = j.at("divisors").get<std::vector<u64>>();
    g.method = parse_method(j.at("method").get<std::string>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("cache record: ") + e.what());
  }
}

ClassGroupCache::ClassGroupCache(std::filesystem::path path, Mode mode) : path_(std::move(path)), mode_(mode) {
  std::string data;
  {
    std::ifstream in(path_, std::ios::binary);
    if (!in) {
      if (mode_ == Mode::ReadOnly) return;  // nothing stored yet
      std::ofstream create(path_, std::ios::binary | std::ios::app);
      if (!create) throw Error(Errc::IOError, io_message("cannot create cache", path_));
      return;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    data = ss.str();
  }
  std::size_t pos = 0, good_end = 0, line_no = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    ++line_no;
    const bool complete = nl != std::string::npos;
    const std::string line = data.substr(pos, complete ? nl - pos : std::string::npos);
    try {
      if (!complete) throw Error(Errc::ParseError, "incomplete trailing record");
      if (!line.empty()) {
        auto g = decode(line);
        index_.insert_or_assign(g.discriminant, std::move(g));
      }
    } catch (const Error& e) {
      if (e.code() == Errc::VersionMismatch) throw;
      const bool trailing = !complete || nl + 1 >= data.size();
      if (!trailing) {
        throw Error(Errc::IOError, path_.string() + ": corrupt record at line " + std::to_string(line_no));
      }
      if (mode_ == Mode::ReadWrite) {
        warnings_.push_back(path_.string() + ": truncated corrupt trailing record at line " + std::to_string(line_no));
        std::error_code ec;
        std::filesystem::resize_file(path_, good_end, ec);
        if (ec) throw Error(Errc::IOError, path_.string() + ": cannot truncate: " + ec.message());
      }
      break;
    }
    pos = nl + 1;
    good_end = pos;
  }
}

std::size_t ClassGroupCache::size() const {
  std::lock_guard lock(mutex_);
  return index_.size();
}

std::optional<ClassGroupStructure> ClassGroupCache::get(i64 disc) const {
  std::lock_guard lock(mutex_);
  const auto it = index_.find(disc);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ClassGroupCache::put(const ClassGroupStructure& g) {
  std::lock_guard lock(mutex_);
  if (index_.contains(g.discriminant)) return;
  if (mode_ == Mode::ReadOnly) throw Error(Errc::IOError, "cache opened read-only");
  const std::string line = encode(g) + "\n";
  const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::IOError, io_message("cannot open cache", path_));
  const ssize_t n = ::write(fd, line.data(), line.size());
  const int saved = errno;
  ::close(fd);
  if (n != static_cast<ssize_t>(line.size())) {
    errno = saved;
    throw Error(Errc::IOError, io_message("short write to cache", path_));
  }
  index_.emplace(g.discriminant, g);
}

ClassGroupStructure ClassGroupCache::get_or_compute(i64 disc, u64 cap) {
  if (auto hit = get(disc)) return *hit;
  auto g = class_group(disc, cap);
  put(g);
  return g;
}

}  // namespace torsion
