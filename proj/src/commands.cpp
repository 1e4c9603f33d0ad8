#include "infoverload/commands.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "infoverload/agent.hpp"
#include "infoverload/market.hpp"
#include "infoverload/sweep.hpp"

namespace infoverload {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 6> kCommands = {"agent",   "market", "conjectures",
                                                       "figure3", "sweep",  "returns"};

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string_view boolean(bool b) { return b ? "true" : "false"; }

class CsvWriter {
 public:
  CsvWriter(const fs::path& dir, std::string name, CommandResult& result)
      : out_(dir / name, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + (dir / name).string());
    result.files.push_back(std::move(name));
  }

  CsvWriter& cell(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << csv_field(text);
    first_ = false;
    return *this;
  }
  CsvWriter& cell(const char* text) { return cell(std::string_view(text)); }
  CsvWriter& cell(double value) { return cell(format_number(value)); }
  CsvWriter& cell(std::size_t value) { return cell(std::string_view(std::to_string(value))); }
  CsvWriter& cell(bool value) { return cell(boolean(value)); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

  void header(std::span<const std::string_view> names) {
    for (auto n : names) cell(n);
    end_row();
  }
  void header(std::initializer_list<std::string_view> names) {
    header(std::span<const std::string_view>(names.begin(), names.size()));
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

std::string optimum_text(const UnconstrainedOptimum& o) {
  return o.is_unbounded() ? "inf" : format_number(o.level());
}

std::string critical_text(const std::optional<double>& v) {
  return v ? format_number(*v) : "none";
}

std::string critical_text(const CriticalLevel& c) {
  switch (c.kind) {
    case CriticalLevel::Kind::Absent: return "none";
    case CriticalLevel::Kind::Unbounded: return "inf";
    case CriticalLevel::Kind::Finite: return format_number(c.level);
  }
  return "none";
}

void agent_row(CsvWriter& csv, std::size_t id, const Trader& t, const AgentRecord& r) {
  csv.cell(id)
      .cell(t.gain())
      .cell(t.loss())
      .cell(t.cost().scale())
      .cell(optimum_text(r.optimum))
      .cell(r.outcome.i_star)
      .cell(to_string(r.outcome.regime))
      .cell(r.outcome.u_star)
      .end_row();
}

constexpr std::array<std::string_view, 8> kAgentHeader = {
    "agent_id", "W", "L", "cost_scale", "i_u", "i_star", "regime", "u_star"};

void run_agent(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto& tc = config.trader;
  AgentRecord record;
  record.optimum = unconstrained_optimum(tc.trader);
  record.outcome = optimize_information(tc.trader, tc.i_max, record.optimum);
  const auto oracle = grid_oracle(tc.trader, tc.i_max, tc.oracle_step);

  CsvWriter agent(out, "agent.csv", result);
  agent.header(kAgentHeader);
  agent_row(agent, 0, tc.trader, record);

  CsvWriter check(out, "oracle_check.csv", result);
  check.header({"method", "i_star", "u_star", "regime"});
  check.cell("optimizer").cell(record.outcome.i_star).cell(record.outcome.u_star)
      .cell(to_string(record.outcome.regime)).end_row();
  check.cell("grid_oracle").cell(oracle.i_star).cell(oracle.u_star)
      .cell(to_string(oracle.regime)).end_row();

  const double gap = std::abs(record.outcome.i_star - oracle.i_star);
  std::ostringstream os;
  os << "i_star=" << format_number(record.outcome.i_star) << " ("
     << to_string(record.outcome.regime) << "), grid oracle " << format_number(oracle.i_star);
  result.summary = os.str();
  if (gap > tc.oracle_step + 1e-6) {
    throw NumericRangeError("optimizer and grid oracle disagree by " + format_number(gap));
  }
}

void run_market_command(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto traders = sample_population(config.population);
  const auto outcome = run_market(config.market, traders);

  CsvWriter agents(out, "market.csv", result);
  agents.header(kAgentHeader);
  for (std::size_t k = 0; k < traders.size(); ++k) agent_row(agents, k, traders[k], outcome.agents[k]);

  CsvWriter summary(out, "market_summary.csv", result);
  summary.header(std::array<std::string_view, 10>{"n_agents", "i_max", "theta", "fraction_informed", "efficient", "corner_zero",
                  "interior", "fully_informed", "excluded", "mean_utility"});
  summary.cell(traders.size())
      .cell(config.market.i_max)
      .cell(config.market.theta)
      .cell(outcome.fraction_informed)
      .cell(outcome.efficient)
      .cell(outcome.counts.corner_zero)
      .cell(outcome.counts.interior)
      .cell(outcome.counts.fully_informed)
      .cell(outcome.excluded)
      .cell(outcome.mean_utility)
      .end_row();
  result.summary = "fraction_informed=" + format_number(outcome.fraction_informed) +
                   (outcome.efficient ? " efficient" : " inefficient");
}

void run_conjectures(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto& cj = config.conjectures;

  const auto muthian = sample_population(cj.muthian.population);
  const auto v1 = check_conjecture1(muthian, cj.muthian.i_max, cj.muthian.theta);

  const auto base = sample_population(cj.overload.population);
  auto leg = [&](const LegConfig& l) {
    MarketLeg m;
    m.config = {cj.overload.i_max, l.theta, config.market.participation_rule};
    m.traders = l.population ? sample_population(*l.population) : base;
    return m;
  };
  const auto v2 = check_conjecture2(leg(cj.overload.efficient_leg), leg(cj.overload.inefficient_leg));

  const auto divergent = sample_population(cj.divergence.population);
  const auto schedule = cj.divergence.schedule.materialize();
  const auto v3 =
      check_conjecture3(divergent, cj.divergence.theta, schedule, cj.divergence.utility_bound);

  CsvWriter verdicts(out, "conjectures.csv", result);
  verdicts.header({"conjecture", "verdict", "detail"});
  for (const auto* v : {&v1, &v2.verdict, &v3.verdict}) {
    verdicts.cell(v->name).cell(v->passed ? "pass" : "fail").cell(v->detail).end_row();
    result.summary += v->name + ": " + (v->passed ? "pass" : "fail") + "\n";
  }

  CsvWriter series(out, "conjecture3_series.csv", result);
  series.header({"i_max", "fraction_informed", "efficient", "full_information_utility"});
  for (const auto& p : v3.points) {
    series.cell(p.i_max).cell(p.fraction_informed).cell(p.efficient)
        .cell(p.full_information_utility).end_row();
  }

  if (!(v1.passed && v2.verdict.passed && v3.verdict.passed)) {
    result.exit_code = exit_code::kConjectureFailed;
  }
}

void run_figure3(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto& tc = config.trader;
  const auto curve = utility_curve(tc.trader, tc.i_max, tc.curve_points);
  CsvWriter csv(out, "figure3.csv", result);
  csv.header({"i", "expected_utility"});
  for (const auto& p : curve.points) csv.cell(p.i).cell(p.expected_utility).end_row();
  result.summary = "argmax i=" + format_number(curve.peak().i) +
                   " E[U]=" + format_number(curve.peak().expected_utility);
}

void run_sweep(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto traders = sample_population(config.population);
  const auto grid = config.sweep.i_max_grid.materialize();
  const double theta = config.market.theta;

  const auto series = sweep_imax(traders, grid, theta);
  CsvWriter phase(out, "phase.csv", result);
  phase.header({"i_max", "fraction_informed", "efficient"});
  for (const auto& p : series.points) {
    phase.cell(p.i_max).cell(p.fraction_informed).cell(p.efficient).end_row();
  }

  std::vector<double> multipliers{1.0};
  std::vector<std::optional<double>> detected{series.critical_imax};
  if (config.sweep.cost_multipliers) {
    multipliers = config.sweep.cost_multipliers->materialize();
    const auto diagram = sweep_2d(traders, grid, multipliers, theta);
    detected.clear();
    CsvWriter cells(out, "phase_2d.csv", result);
    cells.header({"cost_multiplier", "i_max", "fraction_informed", "efficient"});
    for (std::size_t r = 0; r < diagram.rows.size(); ++r) {
      for (const auto& p : diagram.rows[r].points) {
        cells.cell(multipliers[r]).cell(p.i_max).cell(p.fraction_informed).cell(p.efficient).end_row();
      }
      detected.push_back(diagram.rows[r].critical_imax);
    }
  }

  CsvWriter critical(out, "critical.csv", result);
  critical.header({"cost_multiplier", "critical_imax_sweep", "critical_imax_quantile"});
  std::vector<Trader> scaled = traders;
  for (std::size_t r = 0; r < multipliers.size(); ++r) {
    for (std::size_t k = 0; k < traders.size(); ++k) {
      scaled[k] = traders[k].with_cost(traders[k].cost().scaled(multipliers[r]));
    }
    critical.cell(multipliers[r])
        .cell(critical_text(detected[r]))
        .cell(critical_text(critical_imax_quantile(scaled, theta)))
        .end_row();
  }
  result.summary = "critical i_max=" + critical_text(series.critical_imax);
}

void run_returns(const RunConfig& config, const fs::path& out, CommandResult& result) {
  const auto sample = simulate_muthian_returns(config.returns.model, config.returns.n, config.seed);
  CsvWriter draws(out, "returns.csv", result);
  draws.header({"draw_index", "value"});
  for (std::size_t k = 0; k < sample.draws.size(); ++k) draws.cell(k).cell(sample.draws[k]).end_row();

  CsvWriter summary(out, "returns_summary.csv", result);
  summary.header({"n", "r_of", "noise_sd", "mean", "sd"});
  summary.cell(sample.draws.size())
      .cell(config.returns.model.r_of)
      .cell(config.returns.model.noise_sd)
      .cell(sample.mean)
      .cell(sample.sd)
      .end_row();
  result.summary = "mean=" + format_number(sample.mean) + " sd=" + format_number(sample.sd);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& out, std::string_view name, const RunConfig& config,
                    const CommandResult& result) {
  const json manifest = {{"tool", kToolName},
                         {"version", kToolVersion},
                         {"subcommand", name},
                         {"config_hash", config_hash(config)},
                         {"master_seed", config.seed},
                         {"timestamp", utc_timestamp()},
                         {"exit_code", result.exit_code},
                         {"outputs", result.files}};
  std::ofstream file(out / "manifest.json", std::ios::binary | std::ios::trunc);
  file << manifest.dump(2) << '\n';
}

}  // namespace

std::span<const std::string_view> command_names() noexcept { return kCommands; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

CommandResult run_command(std::string_view name, const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  CommandResult result;
  if (name == "agent") {
    run_agent(config, out_dir, result);
  } else if (name == "market") {
    run_market_command(config, out_dir, result);
  } else if (name == "conjectures") {
    run_conjectures(config, out_dir, result);
  } else if (name == "figure3") {
    run_figure3(config, out_dir, result);
  } else if (name == "sweep") {
    run_sweep(config, out_dir, result);
  } else if (name == "returns") {
    run_returns(config, out_dir, result);
  } else {
    throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
  }
  write_manifest(out_dir, name, config, result);
  return result;
}

int exit_code_for(const std::exception& error) noexcept {
  if (dynamic_cast<const ConfigFileError*>(&error)) return exit_code::kConfigMissing;
  if (dynamic_cast<const ConfigSyntaxError*>(&error)) return exit_code::kConfigSyntax;
  if (dynamic_cast<const ConfigError*>(&error)) return exit_code::kConfig;
  if (dynamic_cast<const ParameterDomainError*>(&error)) return exit_code::kConfig;
  if (dynamic_cast<const PreconditionError*>(&error)) return exit_code::kConfig;
  if (dynamic_cast<const std::invalid_argument*>(&error)) return exit_code::kUsage;
  return exit_code::kNumeric;
}

std::string error_record(const std::exception& error) {
  std::string kind = "numeric";
  std::string field;
  if (const auto* c = dynamic_cast<const ConfigError*>(&error)) {
    field = c->field();
    kind = dynamic_cast<const ConfigFileError*>(&error)     ? "config_missing"
           : dynamic_cast<const ConfigSyntaxError*>(&error) ? "config_syntax"
                                                            : "config";
  } else if (dynamic_cast<const ParameterDomainError*>(&error)) {
    kind = "parameter_domain";
  } else if (dynamic_cast<const PreconditionError*>(&error)) {
    kind = "precondition";
  } else if (dynamic_cast<const InvariantViolation*>(&error)) {
    kind = "invariant_violation";
  } else if (dynamic_cast<const std::invalid_argument*>(&error)) {
    kind = "usage";
  }
  const json record = {{"error", kind},
                       {"field", field},
                       {"message", error.what()},
                       {"exit_code", exit_code_for(error)}};
  return record.dump();
}

}  // namespace infoverload
