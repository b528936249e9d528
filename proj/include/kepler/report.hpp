#pragma once

// JSON-lines reports and the JSON form of the run configuration.
//
// Report schema "kepler-report/1": one object per case
//   {"suite", "case", "lhs": [re, im], "rhs": [re, im], "residual",
//    "tolerance", "relation", "pass"}
// followed by one summary object
//   {"summary": true, "schema", "config", "suites", "cases", "failed",
//    "max_residual", "pass"}.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kepler/verify.hpp"

namespace kepler {

inline constexpr const char* report_schema = "kepler-report/1";

inline nlohmann::ordered_json complex_json(Complex z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

inline nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["case"] = r.name;
  j["lhs"] = complex_json(r.lhs);
  j["rhs"] = complex_json(r.rhs);
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["relation"] = r.relation;
  j["pass"] = r.pass;
  return j;
}

inline nlohmann::ordered_json to_json(const SuiteConfig& c) {
  nlohmann::ordered_json j;
  j["r"] = c.r;
  j["s"] = c.s;
  j["lambda"] = c.lambda;
  j["d"] = c.d ? nlohmann::ordered_json(*c.d) : nlohmann::ordered_json(nullptr);
  j["coefficients"] = c.coefficients;
  j["nu"] = c.nu;
  j["M"] = c.M;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["recovery_weight"] = c.recovery_weight;
  j["mc_samples"] = c.mc_samples;
  j["sphere_samples"] = c.sphere_samples;
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [key, value] : c.tolerances) tol[key] = value;
  j["tolerances"] = tol;
  return j;
}

/// Applies the keys present in `j` on top of `c`. Unknown keys are rejected.
inline void apply_json(SuiteConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "r") c.r = value.get<int>();
      else if (key == "s") c.s = value.get<int>();
      else if (key == "lambda") c.lambda = value.get<int>();
      else if (key == "d") {
        if (value.is_null()) c.d.reset();
        else c.d = value.get<int>();
      } else if (key == "coefficients") c.coefficients = value.get<std::string>();
      else if (key == "nu") c.nu = value.get<double>();
      else if (key == "M") c.M = value.get<int>();
      else if (key == "k") c.k = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "recovery_weight") c.recovery_weight = value.get<int>();
      else if (key == "mc_samples") c.mc_samples = value.get<long>();
      else if (key == "sphere_samples") c.sphere_samples = value.get<long>();
      else if (key == "workers") c.workers = value.get<int>();
      else if (key == "tolerances") {
        for (const auto& [name, tol] : value.items()) {
          default_tolerance(name);
          c.tolerances[name] = tol.get<double>();
        }
      } else if (key == "suites" || key == "out" || key == "command") {
        // read by the CLI
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

struct SuiteReport {
  std::vector<std::string> suites;
  std::vector<Record> records;

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  int failed() const {
    int n = 0;
    for (const auto& r : records) n += r.pass ? 0 : 1;
    return n;
  }
};

/// Validates the configuration, then runs the suites in the given order.
inline SuiteReport run_suites(const std::vector<std::string>& suites, const SuiteConfig& cfg) {
  (void)cfg.space();
  (void)cfg.sequence();
  for (const auto& name : suites) {
    bool known = false;
    for (const auto& n : suite_names()) known = known || n == name;
    if (!known) throw ConfigError("unknown suite '" + name + "'");
  }
  SuiteReport report;
  report.suites = suites;
  for (const auto& name : suites) {
    auto recs = run_suite(name, cfg);
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  return report;
}

inline void write_report(std::ostream& out, const SuiteReport& report, const SuiteConfig& cfg) {
  double worst = 0.0;
  for (const auto& r : report.records) {
    out << to_json(r).dump() << '\n';
    if (r.relation == "<=") worst = std::max(worst, r.residual);
  }
  nlohmann::ordered_json summary;
  summary["summary"] = true;
  summary["schema"] = report_schema;
  summary["config"] = to_json(cfg);
  summary["suites"] = report.suites;
  summary["cases"] = report.records.size();
  summary["failed"] = report.failed();
  summary["max_residual"] = worst;
  summary["pass"] = report.pass();
  out << summary.dump() << '\n';
}

inline std::string report_string(const SuiteReport& report, const SuiteConfig& cfg) {
  std::ostringstream os;
  write_report(os, report, cfg);
  return os.str();
}

}  // namespace kepler
