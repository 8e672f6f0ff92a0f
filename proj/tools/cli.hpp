#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nct/hmodule.hpp"

namespace nct::cli {

enum ExitCode { kPass = 0, kInvariantFailure = 1, kConfigError = 2 };

/// Load-time configuration failure; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key-value run configuration.  Every key has a default; unknown keys are
/// rejected.
struct RunConfig {
  nlohmann::json values;  // complete, defaults merged

  static nlohmann::json defaults();
  /// Parses JSON text, merges defaults, applies key=value overrides and validates.
  static RunConfig load(const std::string& text, const std::vector<std::string>& overrides = {});

  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<double> nums(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  ModuleParams params(double theta) const;
  ModuleParams params() const { return params(num("theta")); }
  GridSpec grid() const;
  PlaneNorm norm() const;
  std::uint64_t seed() const;

  /// 16 hex digits of FNV-1a over the canonical dump.
  std::string fingerprint() const;
};

/// "zero", "gaussian", "hermite:j", "dilated:r:<tag>"; built at scale |eth| in dimension d.
SchwartzVector vector_from_tag(const std::string& tag, const ModuleParams& params);

/// A table with units in the column names, written as CSV and as a JSON mirror.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

std::string to_csv(const Table& t, const RunConfig& cfg);
nlohmann::json to_json(const Table& t, const RunConfig& cfg);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Quick invariant suite over every module; `broken` replaces each tolerance
/// with a negative one so the failure path is exercised.
std::vector<CheckResult> run_invariants(const RunConfig& cfg, bool broken);

Table dnorm_sweep(const RunConfig& cfg);
Table laguerre_approx(const RunConfig& cfg);
Table bridge_length_sweep(const RunConfig& cfg);
Table inner_product(const RunConfig& cfg);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace nct::cli
