#include <cstdio>
#include <fstream>

#include "torsion/cli.hpp"
#include "torsion/error.hpp"

namespace torsion::cli {

nlohmann::ordered_json Config::to_json() const {
  nlohmann::ordered_json j;
  j["l_tol"] = l_tol;
  j["scan_resolution"] = scan_resolution;
  j["c2"] = c2;
  j["theta"] = theta;
  j["sieve_cap"] = sieve_cap;
  j["class_group_cap"] = class_group_cap;
  j["cache"] = cache;
  j["format"] = format;
  j["threads"] = threads;
  return j;
}

std::string Config::hash() const {
  u64 h = 0xcbf29ce484222325ull;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Config::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::ParseError, "config: " + what); };
  if (!(l_tol > 0.0)) bad("l_tol must be positive");
  if (!(scan_resolution > 0.0)) bad("scan_resolution must be positive");
  if (!(c2 > 0.0)) bad("c2 must be positive");
  if (!(theta > 0.0)) bad("theta must be positive");
  if (sieve_cap < 2) bad("sieve_cap must be at least 2");
  if (class_group_cap < 3) bad("class_group_cap must be at least 3");
  if (format != "csv" && format != "jsonl") bad("format must be csv or jsonl");
  if (threads < 1) bad("threads must be at least 1");
}

void apply_overrides(Config& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "l_tol") cfg.l_tol = v.get<double>();
      else if (key == "scan_resolution") cfg.scan_resolution = v.get<double>();
      else if (key == "c2") cfg.c2 = v.get<double>();
      else if (key == "theta") cfg.theta = v.get<double>();
      else if (key == "sieve_cap") cfg.sieve_cap = v.get<u64>();
      else if (key == "class_group_cap") cfg.class_group_cap = v.get<u64>();
      else if (key == "cache") cfg.cache = v.get<std::string>();
      else if (key == "format") cfg.format = v.get<std::string>();
      else if (key == "threads") cfg.threads = v.get<unsigned>();
      else throw Error(Errc::ParseError, "config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("config: ") + e.what());
  }
  cfg.validate();
}

Config load_config(const std::optional<std::filesystem::path>& path) {
  Config cfg;
  if (!path) return cfg;
  std::ifstream in(*path);
  if (!in) throw Error(Errc::IOError, "cannot read config " + path->string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, "config " + path->string() + ": " + e.what());
  }
  apply_overrides(cfg, j);
  return cfg;
}

}  // namespace torsion::cli
