#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisen/errors.hpp"

namespace eisen {

inline constexpr const char* kReportSchema = "eisen.report";
inline constexpr int kReportSchemaVersion = 1;

enum class CheckStatus { Pass, Fail, Error };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

inline CheckStatus parse_status(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "error") return CheckStatus::Error;
  fail(ErrorCode::ParseError, "unknown check status '" + s + "'");
}

/// One executed check. kind + params are enough to run it again.
struct CheckRecord {
  std::string id;
  std::string suite;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  nlohmann::json payload = nlohmann::json::object();  ///< witness, mismatch or informational notes
  std::optional<double> wall_ms;

  friend bool operator==(const CheckRecord& a, const CheckRecord& b) {
    return a.id == b.id && a.suite == b.suite && a.kind == b.kind && a.params == b.params && a.status == b.status &&
           a.detail == b.detail && a.payload == b.payload && a.wall_ms == b.wall_ms;
  }
};

struct ReportSummary {
  std::size_t total = 0, passed = 0, failed = 0, errors = 0;
  friend bool operator==(const ReportSummary& a, const ReportSummary& b) {
    return a.total == b.total && a.passed == b.passed && a.failed == b.failed && a.errors == b.errors;
  }
};

struct Report {
  std::string suite;
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckRecord> records;

  ReportSummary summary() const {
    ReportSummary s;
    s.total = records.size();
    for (const auto& r : records) {
      if (r.status == CheckStatus::Pass) ++s.passed;
      if (r.status == CheckStatus::Fail) ++s.failed;
      if (r.status == CheckStatus::Error) ++s.errors;
    }
    return s;
  }
  bool all_passed() const {
    ReportSummary s = summary();
    return s.failed == 0 && s.errors == 0;
  }

  friend bool operator==(const Report& a, const Report& b) {
    return a.suite == b.suite && a.config == b.config && a.records == b.records;
  }
};

inline nlohmann::json to_json(const CheckRecord& r) {
  nlohmann::json j = {{"id", r.id},
                      {"suite", r.suite},
                      {"kind", r.kind},
                      {"params", r.params},
                      {"status", to_string(r.status)},
                      {"detail", r.detail},
                      {"payload", r.payload}};
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& c : r.records) records.push_back(to_json(c));
  ReportSummary s = r.summary();
  return {{"schema", kReportSchema},
          {"schema_version", kReportSchemaVersion},
          {"suite", r.suite},
          {"config", r.config},
          {"summary", {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"errors", s.errors}}},
          {"records", records}};
}

inline Report report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) fail(ErrorCode::ParseError, "not an eisen report");
    int version = j.at("schema_version").get<int>();
    if (version != kReportSchemaVersion)
      fail(ErrorCode::ParseError, "unsupported report schema version " + std::to_string(version));
    Report r;
    r.suite = j.at("suite").get<std::string>();
    r.config = j.at("config");
    for (const auto& c : j.at("records")) {
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.suite = c.at("suite").get<std::string>();
      rec.kind = c.at("kind").get<std::string>();
      rec.params = c.at("params");
      rec.status = parse_status(c.at("status").get<std::string>());
      rec.detail = c.at("detail").get<std::string>();
      rec.payload = c.at("payload");
      if (c.contains("wall_ms")) rec.wall_ms = c.at("wall_ms").get<double>();
      r.records.push_back(std::move(rec));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string report_to_csv(const Report& r) {
  bool timed = false;
  for (const auto& c : r.records) timed = timed || c.wall_ms.has_value();
  std::ostringstream os;
  os << "id,suite,kind,status,params,detail" << (timed ? ",wall_ms" : "") << '\n';
  for (const auto& c : r.records) {
    os << csv_escape(c.id) << ',' << csv_escape(c.suite) << ',' << csv_escape(c.kind) << ',' << to_string(c.status)
       << ',' << csv_escape(c.params.dump()) << ',' << csv_escape(c.detail);
    if (timed) os << ',' << (c.wall_ms ? std::to_string(*c.wall_ms) : "");
    os << '\n';
  }
  return os.str();
}

inline std::string markdown_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

inline std::string report_to_markdown(const Report& r) {
  ReportSummary s = r.summary();
  std::ostringstream os;
  os << "# eisen report: " << r.suite << "\n\n";
  os << "| total | passed | failed | errors |\n|---|---|---|---|\n";
  os << "| " << s.total << " | " << s.passed << " | " << s.failed << " | " << s.errors << " |\n\n";
  if (r.records.empty()) return os.str();
  os << "| id | status | detail |\n|---|---|---|\n";
  for (const auto& c : r.records)
    os << "| " << markdown_escape(c.id) << " | " << to_string(c.status) << " | " << markdown_escape(c.detail) << " |\n";
  return os.str();
}

enum class OutputFormat { Json, Csv, Markdown };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "markdown" || s == "md") return OutputFormat::Markdown;
  fail(ErrorCode::ConfigError, "unknown format '" + s + "' (expected json, csv or markdown)");
}

inline std::string emit(const Report& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return to_json(r).dump(2) + "\n";
    case OutputFormat::Csv: return report_to_csv(r);
    case OutputFormat::Markdown: return report_to_markdown(r);
  }
  return {};
}

}  // namespace eisen
