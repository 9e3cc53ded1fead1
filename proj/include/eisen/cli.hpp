#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eisen/cosets.hpp"
#include "eisen/report.hpp"
#include "eisen/suites.hpp"
#include "eisen/zeta.hpp"

namespace eisen::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigError = 2 };

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorCode::IoError, "failed writing '" + path + "'");
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::vector<Rational> parse_alpha_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_rational(item));
    } catch (const Error& e) {
      fail(ErrorCode::ConfigError, std::string("bad Satake parameter: ") + e.what());
    }
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "--alphas needs at least one value");
  return out;
}

inline std::string ledger_markdown(const IdentityReport& r) {
  std::ostringstream os;
  os << "# " << r.identity << " ledger, alphas " << r.params.str() << ", q = " << r.params.q << "\n\n";
  for (const auto& v : r.variants)
    os << "- variant " << v.name << " `" << v.formula << "`: "
       << (v.matches() ? "matches" : "first differs at X^" + std::to_string(*v.first_mismatch)) << "\n";
  os << "\n| exps | mu | spherical | degree | contribution | partial sum |\n|---|---|---|---|---|---|\n";
  for (const auto& row : r.ledger.rows)
    os << "| " << row.cell.str() << " | " << row.mu << " | " << row.spherical << " | " << row.degree << " | "
       << row.contribution << " | " << row.partial_sum << " |\n";
  return os.str();
}

inline std::string orbits_markdown(const OrbitTable& t) {
  std::ostringstream os;
  os << "# orbits for m = " << t.m << ", n = " << t.n << ", q = " << t.q << " (" << t.points << " points)\n\n";
  os << "| orbit | size | rank | contains epsilon_r |\n|---|---|---|---|\n";
  for (const auto& o : t.orbits) {
    os << "| " << o.id << " | " << o.size << " | " << o.rank << " | ";
    for (std::size_t k = 0; k < o.epsilon_ranks.size(); ++k) os << (k ? ", " : "") << o.epsilon_ranks[k];
    os << " |\n";
  }
  return os.str();
}

inline std::string summary_line(const std::string& verb, const Report& r) {
  ReportSummary s = r.summary();
  return "eisen " + verb + " " + r.suite + ": " + std::to_string(s.total) + " checks, " + std::to_string(s.passed) +
         " passed, " + std::to_string(s.failed) + " failed, " + std::to_string(s.errors) + " errors\n";
}

/// Entry point of the eisen tool; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of Kronecker-embedding double cosets and unramified zeta identities", "eisen"};
  app.require_subcommand(1);

  std::string format = "json", out_path, config_path;
  RunConfig config;
  std::string suite;
  std::optional<std::size_t> order, samples, jobs;
  std::optional<std::uint64_t> seed, budget;
  bool timings = false;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "cosets, stabilizers, kron-props, gj, local-identity, arch-iwasawa or all")
      ->required();
  verify->add_option("--config", config_path, "JSON file with RunConfig fields");
  verify->add_option("--order", order, "series truncation order N");
  verify->add_option("--seed", seed, "PRNG seed");
  verify->add_option("--samples", samples, "alpha tuples per grid point");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_option("--budget", budget, "enumeration budget");
  verify->add_flag("--timings", timings, "record wall times (reports are then not byte-reproducible)");

  std::string identity, alphas;
  int q = 0;
  std::size_t m = 0, ledger_order = 12;
  auto* ledger = app.add_subcommand("ledger", "print the torus-sum ledger of one identity");
  ledger->add_option("identity", identity, "gj or local")->required()->check(CLI::IsMember({"gj", "local"}));
  ledger->add_option("--alphas", alphas, "comma separated Satake parameters, e.g. 2,3/4")->required();
  ledger->add_option("--q", q, "residue field size")->required();
  ledger->add_option("-m,--m", m, "GL_m factor for the local identity");
  ledger->add_option("--order", ledger_order, "series truncation order N");

  std::size_t om = 0, on = 0;
  int oq = 0;
  std::uint64_t orbit_budget = kDefaultEnumerationBudget;
  auto* orbits = app.add_subcommand("orbits", "enumerate double-coset orbits on the projective space");
  orbits->add_option("m", om)->required();
  orbits->add_option("n", on)->required();
  orbits->add_option("q", oq)->required();
  orbits->add_option("--budget", orbit_budget, "enumeration budget");

  std::string report_path, only_id;
  bool rerun_all = false;
  auto* rerun_cmd = app.add_subcommand("rerun", "re-execute records of a saved JSON report");
  rerun_cmd->add_option("report", report_path, "report produced by verify --format json")->required();
  rerun_cmd->add_option("--id", only_id, "re-run only this record");
  rerun_cmd->add_flag("--all", rerun_all, "re-run every record, not just failures");

  for (auto* sub : {verify, ledger, orbits, rerun_cmd}) {
    sub->add_option("--format", format, "json, csv or markdown")->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
    sub->add_option("--out", out_path, "output file (default stdout)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "eisen: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    OutputFormat fmt = parse_format(format);
    if (verify->parsed()) {
      if (!config_path.empty()) config.apply_json(read_json_file(config_path));
      config.suite = suite;
      if (order) config.order = *order;
      if (seed) config.seed = *seed;
      if (samples) config.samples = *samples;
      if (jobs) config.jobs = *jobs;
      if (budget) config.budget = *budget;
      if (timings) config.timings = true;
      config.validate();
      Report r = run_suite(config);
      write_output(emit(r, fmt), out_path, out);
      err << summary_line("verify", r);
      return r.all_passed() ? kPass : kCheckFailure;
    }
    if (ledger->parsed()) {
      auto params = SatakeParams::from_rationals(parse_alpha_list(alphas), q);
      IdentityReport r;
      if (identity == "gj") {
        r = gj_identity_report(params, ledger_order);
      } else {
        if (m == 0) fail(ErrorCode::ConfigError, "the local identity needs -m");
        r = local_identity_report(m, params, ledger_order);
      }
      std::string text;
      if (fmt == OutputFormat::Csv) text = r.ledger.to_csv();
      if (fmt == OutputFormat::Markdown) text = ledger_markdown(r);
      if (fmt == OutputFormat::Json) {
        nlohmann::json j = r.to_json();
        j["ledger"] = r.ledger.to_json();
        text = j.dump(2) + "\n";
      }
      write_output(text, out_path, out);
      bool ok = identity == "gj" ? r.passed() : r.variant("A")->matches();
      return ok ? kPass : kCheckFailure;
    }
    if (orbits->parsed()) {
      OrbitTable t = enumerate_orbits(om, on, oq, orbit_budget);
      std::string text = fmt == OutputFormat::Csv        ? t.to_csv()
                         : fmt == OutputFormat::Markdown ? orbits_markdown(t)
                                                         : t.to_json().dump(2) + "\n";
      write_output(text, out_path, out);
      return kPass;
    }
    if (rerun_cmd->parsed()) {
      Report saved = report_from_json(read_json_file(report_path));
      Report again;
      again.suite = saved.suite;
      again.config = saved.config;
      for (const auto& rec : saved.records) {
        bool pick = only_id.empty() ? (rerun_all || rec.status != CheckStatus::Pass) : rec.id == only_id;
        if (pick) again.records.push_back(rerun(rec, rec.wall_ms.has_value()));
      }
      if (!only_id.empty() && again.records.empty()) fail(ErrorCode::ConfigError, "no record with id '" + only_id + "'");
      write_output(emit(again, fmt), out_path, out);
      err << summary_line("rerun", again);
      return again.all_passed() ? kPass : kCheckFailure;
    }
  } catch (const Error& e) {
    err << "eisen: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::ParseError:
      case ErrorCode::IoError:
      case ErrorCode::DomainError:
      case ErrorCode::BadShape:
      case ErrorCode::NonRegularSatake:
        return kConfigError;
      default:
        return kCheckFailure;
    }
  }
  return kConfigError;
}

}  // namespace eisen::cli
