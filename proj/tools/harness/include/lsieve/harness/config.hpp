// Experiment configuration: a flat key=value document mirrored by the CLI flags,
// with a lossless JSON round-trip.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lsieve::harness {

/// A configuration problem tied to one key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key \"" + key + "\": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  std::vector<std::string> family{"all"};  // all | squares | power | square_norm
  int k = 3;                               // exponent of the power family
  std::vector<double> Q{2, 3, 4};
  std::vector<double> N{4, 16};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> coeffs{"ones"};  // ones | random | extremal
  double eps = 0.0;
  double C = 1.0;
  std::optional<double> tol;  // overrides every pass/fail tolerance
  std::string associates = "literal";
  std::string range = "full";
  std::vector<double> Q0{5, 10, 20};
  int matrices = 10;
  int rows = 8;
  int cols = 12;
  std::uint64_t max_points = 0;
  std::uint64_t max_operations = 0;
  int threads = 0;  // 0: hardware concurrency
  bool timing = false;
  std::string out;  // empty: stdout
  std::string format = "csv";

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);

  std::map<std::string, std::string> to_flat() const;
  /// Keys absent from the map keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_flat(const std::map<std::string, std::string>& kv);

  /// FNV-1a 64 of the canonical JSON, leaving out the output-only keys
  /// (out, format, timing, threads), as 16 hex digits.
  std::string hash() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Every key of the flat document, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_flat(const std::string& text);
std::map<std::string, std::string> read_flat_file(const std::string& path);
std::string write_flat(const std::map<std::string, std::string>& kv);

}  // namespace lsieve::harness
