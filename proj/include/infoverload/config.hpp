#pragma once

// JSON run configuration. Every section is optional; omitted keys take the
// reference-suite defaults. Unknown keys are rejected.
//
//   {
//     "seed": 1,
//     "population": {"cohorts": [{"n_agents": 1000, "gain": 1, "loss": 1,
//        "success": {"family": "exp_saturating", "params": {"a": 1}},
//        "cost": {"family": "power", "params": {"c": [0.01, 1.0], "p": 2}}}]},
//     "market": {"i_max": 2, "theta": 0.5, "participation_rule": false},
//     "trader": {"gain": 1, "loss": 1, "success": {...}, "cost": {...},
//                "i_max": 5, "curve_points": 5001, "oracle_step": 1e-4},
//     "sweep": {"i_max_grid": {"kind": "geometric", "start": 0.05, "stop": 100, "count": 60},
//               "cost_multipliers": [0.5, 1, 2]},
//     "returns": {"r_of": 0.05, "noise_sd": 0.2, "n": 100000},
//     "conjectures": {"muthian": {...}, "overload": {...}, "divergence": {...}}
//   }
//
// Population parameters accept a number or a [lo, hi] interval.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoverload/agent.hpp"
#include "infoverload/errors.hpp"
#include "infoverload/market.hpp"

namespace infoverload {

/// The config file does not exist or cannot be read.
class ConfigFileError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The config file is not well-formed JSON.
class ConfigSyntaxError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct GridSpec {
  enum class Kind { Explicit, Linear, Geometric, Doubling };
  Kind kind = Kind::Explicit;
  std::vector<double> values;  // Explicit
  double start = 1.0;
  double stop = 1.0;  // Linear, Geometric
  std::size_t count = 1;

  std::vector<double> materialize() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// start, 2 start, 4 start, ... (count entries, exact powers of two).
std::vector<double> doubling_grid(double start, std::size_t count);

struct TraderConfig {
  Trader trader{1.0, 1.0, SuccessCurve::exp_saturating(1.0), CostCurve::power(0.1, 2.0)};
  double i_max = 5.0;
  std::size_t curve_points = 5001;
  double oracle_step = 1e-4;

  friend bool operator==(const TraderConfig&, const TraderConfig&) = default;
};

struct SweepConfig {
  GridSpec i_max_grid{GridSpec::Kind::Geometric, {}, 0.05, 100.0, 60};
  std::optional<GridSpec> cost_multipliers;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct ReturnsConfig {
  ReturnModel model{0.05, 0.2};
  std::size_t n = 100000;

  friend bool operator==(const ReturnsConfig&, const ReturnsConfig&) = default;
};

struct MuthianCheckConfig {
  PopulationSpec population;
  double i_max = 2.0;
  double theta = 1.0;

  friend bool operator==(const MuthianCheckConfig&, const MuthianCheckConfig&) = default;
};

struct LegConfig {
  std::optional<PopulationSpec> population;  // falls back to the overload population
  double theta = 0.5;

  friend bool operator==(const LegConfig&, const LegConfig&) = default;
};

struct OverloadCheckConfig {
  PopulationSpec population;
  double i_max = 2.0;
  LegConfig efficient_leg;
  LegConfig inefficient_leg;

  friend bool operator==(const OverloadCheckConfig&, const OverloadCheckConfig&) = default;
};

struct DivergenceCheckConfig {
  PopulationSpec population;
  double theta = 0.5;
  GridSpec schedule{GridSpec::Kind::Doubling, {}, 1.0, 1.0, 15};
  double utility_bound = -1e6;

  friend bool operator==(const DivergenceCheckConfig&, const DivergenceCheckConfig&) = default;
};

struct ConjectureConfig {
  MuthianCheckConfig muthian;
  OverloadCheckConfig overload;
  DivergenceCheckConfig divergence;

  friend bool operator==(const ConjectureConfig&, const ConjectureConfig&) = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  PopulationSpec population;
  MarketConfig market;
  TraderConfig trader;
  SweepConfig sweep;
  ReturnsConfig returns;
  ConjectureConfig conjectures;

  /// Reference-suite defaults.
  static RunConfig defaults();

  /// Sets the master seed of every population.
  void apply_seed(std::uint64_t new_seed);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Validates and converts a JSON document. Errors carry the field path.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);

/// Reads and validates a config file. Throws ConfigFileError, ConfigSyntaxError
/// or ConfigError.
RunConfig parse_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace infoverload
