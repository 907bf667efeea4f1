#include "torsion/cli.hpp"
#include "torsion/harness.hpp"

namespace torsion::cli {

std::string csv_cell(const nlohmann::ordered_json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::null: return "";
    case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case nlohmann::json::value_t::number_integer: return std::to_string(v.get<i64>());
    case nlohmann::json::value_t::number_unsigned: return std::to_string(v.get<u64>());
    case nlohmann::json::value_t::number_float: return format_real(v.get<double>());
    case nlohmann::json::value_t::string: {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q.push_back('"');
        q.push_back(c);
      }
      return q + "\"";
    }
    case nlohmann::json::value_t::array: {
      std::string s;
      for (const auto& e : v) {
        if (!s.empty()) s.push_back(';');
        s += csv_cell(e);
      }
      return s;
    }
    default: return v.dump();
  }
}

Emitter::Emitter(std::ostream& out, const Config& cfg, std::string invocation)
    : out_(out), cfg_(cfg), invocation_(std::move(invocation)) {}

void Emitter::header() {
  if (header_done_) return;
  header_done_ = true;
  if (cfg_.format == "csv") {
    out_ << "# torsion_probe " << kVersion << '\n';
    out_ << "# config_hash " << cfg_.hash() << '\n';
    out_ << "# invocation " << invocation_ << '\n';
    out_ << "# config " << cfg_.to_json().dump() << '\n';
    for (const auto& n : notes_) out_ << "# " << n << '\n';
  } else {
    nlohmann::ordered_json h;
    h["tool"] = "torsion_probe";
    h["version"] = kVersion;
    h["config_hash"] = cfg_.hash();
    h["invocation"] = invocation_;
    h["config"] = cfg_.to_json();
    if (!notes_.empty()) h["notes"] = notes_;
    nlohmann::ordered_json wrap;
    wrap["header"] = h;
    out_ << wrap.dump() << '\n';
  }
}

void Emitter::record(const nlohmann::ordered_json& row) {
  header();
  if (cfg_.format != "csv") {
    out_ << row.dump() << '\n';
    return;
  }
  if (columns_.empty()) {
    std::string line;
    for (const auto& [k, v] : row.items()) {
      columns_.push_back(k);
      line += (line.empty() ? "" : ",") + k;
    }
    out_ << line << '\n';
  }
  std::string line;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) line.push_back(',');
    if (row.contains(columns_[i])) line += csv_cell(row.at(columns_[i]));
  }
  out_ << line << '\n';
}

void Emitter::csv_block(const std::string& text) {
  header();
  out_ << text;
}

void Emitter::finish() {
  header();
  out_.flush();
}

}  // namespace torsion::cli
