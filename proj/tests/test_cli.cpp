#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsion/cli.hpp"

using namespace torsion::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "torsion_probe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("torsion_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove(p);
  return p;
}

}  // namespace

TEST_CASE("help for every subcommand exits 0") {
  const std::vector<std::vector<std::string>> cmds = {
      {"char", "eval"},         {"char", "info"},          {"char", "list"},           {"char", "attach"},
      {"charsum", "sum"},       {"charsum", "bound"},      {"charsum", "compare"},     {"charsum", "pv"},
      {"lfun", "eval"},         {"lfun", "logderiv"},      {"lfun", "supnorm"},        {"lfun", "scan"},
      {"lfun", "certify"},      {"lfun", "exclude"},       {"kernel", "gaussian"},     {"kernel", "contour"},
      {"kernel", "window"},     {"kernel", "prime-sum"},   {"kernel", "zero-sum"},     {"kernel", "plan"},
      {"field", "disc"},        {"field", "cubic"},        {"field", "classgroup"},    {"field", "torsion"},
      {"field", "genus"},       {"field", "split"},        {"field", "ideals"},        {"field", "family"},
      {"experiment", "quadratic"}, {"experiment", "pure-cubic"}, {"experiment", "hlgr-check"}};
  for (auto args : cmds) {
    args.push_back("--help");
    const auto r = run(args);
    const std::string name = args[0] + " " + args[1];
    CHECK_MESSAGE(r.code == 0, name);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"lfun", "--help"}).code == 0);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"field", "classgroup"}).code == 1);
  CHECK(run({"lfun", "eval", "-q", "4", "-i", "1", "--s", "abc"}).code == 1);
}

TEST_CASE("class group record") {
  const auto r = run({"field", "classgroup", "--disc", "-23"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[1] == R"({"disc":-23,"divisors":[3],"h":3})");
  const auto header = nlohmann::json::parse(ls[0]).at("header");
  CHECK(header.at("version") == kVersion);
  CHECK(header.at("invocation") == "torsion_probe field classgroup --disc -23");
  CHECK(header.at("config_hash").get<std::string>().size() == 16);
  CHECK(run({"field", "classgroup", "--disc", "-12"}).code == 2);
}

TEST_CASE("csv header carries the reproducibility fields") {
  const auto r = run({"--format", "csv", "experiment", "hlgr-check", "--k", "15", "--delta", "1/343", "--ell", "5"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 6);
  CHECK(ls[0] == std::string("# torsion_probe ") + kVersion);
  CHECK(ls[1].rfind("# config_hash ", 0) == 0);
  CHECK(ls[2] == "# invocation torsion_probe --format csv experiment hlgr-check --k 15 --delta 1/343 --ell 5");
  CHECK(ls[3].rfind("# config {", 0) == 0);
  CHECK(ls[4] == "k,delta,ell,L,theta,xi,threshold,pass");
  CHECK(ls[5].substr(ls[5].size() - 4) == "true");
}

TEST_CASE("config precedence: flags over env over file over defaults") {
  const auto cfg = scratch("cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"c2": 0.02, "format": "csv", "cache": "/tmp/from_file.jsonl"})";
  }
  auto r = run({"--config", cfg.string(), "lfun", "certify", "-q", "4", "-i", "1", "--phi", "3.6", "--resolution", "0.01"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("c2,") != std::string::npos);
  CHECK(r.out.find(",0.02,") != std::string::npos);
  CHECK(r.out.find("from_file") != std::string::npos);

  ::setenv(kCacheEnv, "/tmp/from_env.jsonl", 1);
  r = run({"--config", cfg.string(), "field", "disc", "--d", "3"});
  CHECK(r.out.find("from_env") != std::string::npos);
  r = run({"--config", cfg.string(), "--cache", "/tmp/from_flag.jsonl", "--format", "jsonl", "field", "disc", "--d", "3"});
  CHECK(r.out.find("from_flag") != std::string::npos);
  CHECK(r.out.front() == '{');
  ::unsetenv(kCacheEnv);

  r = run({"field", "disc", "--d", "3"});
  CHECK(r.out.find(R"("c2":0.05)") != std::string::npos);

  {
    std::ofstream out(cfg, std::ios::trunc);
    out << "{ not json";
  }
  CHECK(run({"--config", cfg.string(), "field", "disc", "--d", "3"}).code == 3);
  {
    std::ofstream out(cfg, std::ios::trunc);
    out << R"({"colour": 3})";
  }
  CHECK(run({"--config", cfg.string(), "field", "disc", "--d", "3"}).code == 3);
  CHECK(run({"--config", "/nonexistent/cfg.json", "field", "disc", "--d", "3"}).code == 3);
  fs::remove(cfg);
}

TEST_CASE("exit codes by error class") {
  CHECK(run({"lfun", "eval", "-q", "1", "--s", "1"}).code == 2);
  CHECK(run({"experiment", "quadratic", "--family-count", "3", "--varpi", "0.3"}).code == 2);
  CHECK(run({"kernel", "plan", "--ell", "3", "--theta", "0.4", "--xi", "1"}).code == 2);
  CHECK(run({"kernel", "gaussian", "--disc", "-4", "--y", "1", "--cap", "10"}).code == 4);
  const auto fam = scratch("family.txt");
  {
    std::ofstream out(fam);
    out << "-23\n# comment\nnot-a-number\n";
  }
  const auto r = run({"experiment", "quadratic", "--family-file", fam.string(), "--varpi", "0.1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 3") != std::string::npos);
  fs::remove(fam);
}

TEST_CASE("certify reports the taxonomy") {
  auto r = run({"lfun", "certify", "-q", "4", "-i", "1", "--phi", "3.6", "--resolution", "0.01"});
  CHECK(r.code == 0);
  CHECK(r.out.find(R"("verdict":"zero-free")") != std::string::npos);
  r = run({"lfun", "certify", "-q", "4", "-i", "1", "--phi", "3.6", "--resolution", "0.01", "--extra-zero", "0.999,0.2"});
  CHECK(r.code == 2);
  CHECK(r.out.find(R"("verdict":"violation")") != std::string::npos);
}

TEST_CASE("scan emits zeros with notes") {
  const auto r = run({"lfun", "scan", "-q", "1", "--rect", "0,1,10,22", "--resolution", "0.01"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].find("winding 2") != std::string::npos);
  CHECK(nlohmann::json::parse(ls[1]).at("gamma").get<double>() == doctest::Approx(14.134725141734693));
}

TEST_CASE("experiment output is byte-identical across runs and cache states") {
  const auto cache = scratch("cache.jsonl");
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  const std::vector<std::string> base = {"--format", "csv", "--cache", cache.string(), "experiment",
                                         "quadratic", "--family-count", "30", "--varpi", "0.15"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string()});
  REQUIRE(run(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.string()});
  REQUIRE(run(args).code == 0);
  std::ifstream fa(a), fb(b);
  const std::string sa{std::istreambuf_iterator<char>(fa), {}}, sb{std::istreambuf_iterator<char>(fb), {}};
  // the out path is part of the invocation line; compare from the config line on
  CHECK(sa.substr(sa.find("# config ")) == sb.substr(sb.find("# config ")));
  CHECK(lines(sa).size() == 30 + 7);
  fs::remove(cache);
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("version") {
  const auto r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(kVersion) + "\n");
}
