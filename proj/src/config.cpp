#include "infoverload/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "infoverload/sweep.hpp"

namespace infoverload {

using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index_path(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

// Rethrows a ConfigError raised by a nested validator with its field prefixed.
template <typename F>
void with_prefix(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(e.field().empty() ? prefix : join(prefix, e.field()), e.reason());
  } catch (const ParameterDomainError& e) {
    throw ConfigError(prefix, e.what());
  }
}

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const std::string& path() const noexcept { return path_; }
  std::string field(std::string_view key) const { return join(path_, key); }

  const json* get(std::string_view key) {
    const auto it = value_.find(std::string(key));
    if (it == value_.end()) return nullptr;
    used_.insert(std::string(key));
    return &*it;
  }

  double number(std::string_view key, double fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(field(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }

  bool boolean(std::string_view key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v->get<bool>();
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::string string(std::string_view key) {
    const json* v = get(key);
    if (!v) throw ConfigError(field(key), "required");
    if (!v->is_string()) throw ConfigError(field(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& item : value_.items()) {
      if (!used_.contains(item.key())) throw ConfigError(field(item.key()), "unknown key");
    }
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

Interval parse_interval(const json& v, const std::string& path) {
  if (v.is_number()) return Interval::point(v.get<double>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(path, "expected a number or a [lo, hi] pair");
}

json interval_to_json(const Interval& interval) {
  if (interval.degenerate()) return interval.lo;
  return json::array({interval.lo, interval.hi});
}

SuccessFamily parse_success_family(const std::string& label, const std::string& path) {
  if (label == "exp_saturating") return SuccessFamily::ExpSaturating;
  if (label == "hyperbolic") return SuccessFamily::Hyperbolic;
  throw ConfigError(path, "unknown success family '" + label + "'");
}

CostFamily parse_cost_family(const std::string& label, const std::string& path) {
  if (label == "power") return CostFamily::Power;
  if (label == "exp_growth") return CostFamily::ExpGrowth;
  if (label == "zero") return CostFamily::Zero;
  throw ConfigError(path, "unknown cost family '" + label + "'");
}

const char* success_param_name(SuccessFamily family) {
  return family == SuccessFamily::ExpSaturating ? "a" : "k";
}

const char* cost_shape_name(CostFamily family) {
  return family == CostFamily::Power ? "p" : "b";
}

// {family, params} with interval-valued params.
struct CurveRecord {
  std::string family;
  std::string family_path;
  std::string params_path;
  std::vector<std::pair<std::string, Interval>> params;
};

template <typename Family>
CurveRecord read_curve(const json& v, const std::string& path,
                       const std::vector<std::string>& (*names)(const std::string&),
                       Family (*parse_family)(const std::string&, const std::string&)) {
  Section s(v, path);
  CurveRecord rec;
  rec.family_path = s.field("family");
  rec.family = s.string("family");
  parse_family(rec.family, rec.family_path);
  rec.params_path = s.field("params");
  const auto& expected = names(rec.family);
  const json* params = s.get("params");
  if (!expected.empty() && !params) throw ConfigError(rec.params_path, "required");
  if (params) {
    Section p(*params, rec.params_path);
    for (const auto& name : expected) {
      const json* value = p.get(name);
      if (!value) throw ConfigError(p.field(name), "required");
      rec.params.emplace_back(name, parse_interval(*value, p.field(name)));
    }
    p.finish();
  }
  s.finish();
  return rec;
}

const std::vector<std::string>& success_names(const std::string& family) {
  static const std::vector<std::string> a{"a"}, k{"k"}, none{};
  if (family == "exp_saturating") return a;
  if (family == "hyperbolic") return k;
  return none;
}

const std::vector<std::string>& cost_names(const std::string& family) {
  static const std::vector<std::string> power{"c", "p"}, growth{"c", "b"}, none{};
  if (family == "power") return power;
  if (family == "exp_growth") return growth;
  return none;
}

SuccessSpec parse_success_spec(const json& v, const std::string& path) {
  const auto rec = read_curve(v, path, success_names, parse_success_family);
  SuccessSpec spec;
  spec.family = parse_success_family(rec.family, rec.family_path);
  spec.param = rec.params.at(0).second;
  return spec;
}

CostSpec parse_cost_spec(const json& v, const std::string& path) {
  const auto rec = read_curve(v, path, cost_names, parse_cost_family);
  CostSpec spec;
  spec.family = parse_cost_family(rec.family, rec.family_path);
  if (spec.family != CostFamily::Zero) {
    spec.scale = rec.params.at(0).second;
    spec.shape = rec.params.at(1).second;
  } else {
    spec.scale = Interval::point(1.0);
    spec.shape = Interval::point(2.0);
  }
  return spec;
}

json success_spec_to_json(const SuccessSpec& spec) {
  return {{"family", to_string(spec.family)},
          {"params", {{success_param_name(spec.family), interval_to_json(spec.param)}}}};
}

json cost_spec_to_json(const CostSpec& spec) {
  if (spec.family == CostFamily::Zero) {
    return {{"family", "zero"}, {"params", json::object()}};
  }
  return {{"family", to_string(spec.family)},
          {"params",
           {{"c", interval_to_json(spec.scale)},
            {cost_shape_name(spec.family), interval_to_json(spec.shape)}}}};
}

double require_point(const Interval& interval, const std::string& path) {
  if (!interval.degenerate()) throw ConfigError(path, "a single trader needs a fixed value");
  return interval.lo;
}

SuccessCurve parse_success_curve(const json& v, const std::string& path) {
  const auto spec = parse_success_spec(v, path);
  const std::string field = join(path, std::string("params.") + success_param_name(spec.family));
  const double param = require_point(spec.param, field);
  SuccessCurve curve = SuccessCurve::exp_saturating(1.0);
  with_prefix(field, [&] {
    curve = spec.family == SuccessFamily::ExpSaturating ? SuccessCurve::exp_saturating(param)
                                                         : SuccessCurve::hyperbolic(param);
  });
  return curve;
}

CostCurve parse_cost_curve(const json& v, const std::string& path) {
  const auto spec = parse_cost_spec(v, path);
  if (spec.family == CostFamily::Zero) return CostCurve::zero();
  const double scale = require_point(spec.scale, join(path, "params.c"));
  const std::string shape_field = join(path, std::string("params.") + cost_shape_name(spec.family));
  const double shape = require_point(spec.shape, shape_field);
  CostCurve curve = CostCurve::zero();
  with_prefix(join(path, "params"), [&] {
    curve = spec.family == CostFamily::Power ? CostCurve::power(scale, shape)
                                             : CostCurve::exp_growth(scale, shape);
  });
  return curve;
}

json success_curve_to_json(const SuccessCurve& curve) {
  return success_spec_to_json({curve.family(), Interval::point(curve.parameter())});
}

json cost_curve_to_json(const CostCurve& curve) {
  if (curve.is_zero()) return cost_spec_to_json({CostFamily::Zero, {}, {}});
  return cost_spec_to_json(
      {curve.family(), Interval::point(curve.scale()), Interval::point(curve.shape())});
}

Cohort parse_cohort(const json& v, const std::string& path) {
  Section s(v, path);
  Cohort c;
  c.n_agents = s.unsigned_integer("n_agents", 1);
  if (const json* g = s.get("gain")) c.gain = parse_interval(*g, s.field("gain"));
  if (const json* l = s.get("loss")) c.loss = parse_interval(*l, s.field("loss"));
  const json* success = s.get("success");
  if (!success) throw ConfigError(s.field("success"), "required");
  c.success = parse_success_spec(*success, s.field("success"));
  const json* cost = s.get("cost");
  if (!cost) throw ConfigError(s.field("cost"), "required");
  c.cost = parse_cost_spec(*cost, s.field("cost"));
  s.finish();
  return c;
}

PopulationSpec parse_population(const json& v, const std::string& path) {
  Section s(v, path);
  PopulationSpec spec;
  const json* cohorts = s.get("cohorts");
  if (!cohorts || !cohorts->is_array()) throw ConfigError(s.field("cohorts"), "expected an array");
  for (std::size_t k = 0; k < cohorts->size(); ++k) {
    spec.cohorts.push_back(parse_cohort((*cohorts)[k], index_path(s.field("cohorts"), k)));
  }
  s.finish();
  with_prefix(path, [&] { spec.validate(); });
  return spec;
}

json population_to_json(const PopulationSpec& spec) {
  json cohorts = json::array();
  for (const auto& c : spec.cohorts) {
    cohorts.push_back({{"n_agents", c.n_agents},
                       {"gain", interval_to_json(c.gain)},
                       {"loss", interval_to_json(c.loss)},
                       {"success", success_spec_to_json(c.success)},
                       {"cost", cost_spec_to_json(c.cost)}});
  }
  return {{"cohorts", cohorts}};
}

void require_cost_family(const PopulationSpec& spec, bool want_zero, const std::string& path) {
  for (std::size_t k = 0; k < spec.cohorts.size(); ++k) {
    if ((spec.cohorts[k].cost.family == CostFamily::Zero) != want_zero) {
      throw ConfigError(path + ".cohorts[" + std::to_string(k) + "].cost.family",
                        want_zero ? "must be 'zero' (costless information)"
                                  : "must not be 'zero' (elaboration cost required)");
    }
  }
}

GridSpec parse_grid(const json& v, const std::string& path) {
  GridSpec grid;
  if (v.is_array()) {
    grid.kind = GridSpec::Kind::Explicit;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) throw ConfigError(index_path(path, k), "expected a number");
      grid.values.push_back(v[k].get<double>());
    }
  } else {
    Section s(v, path);
    const auto kind = s.string("kind");
    grid.start = s.number("start", 1.0);
    grid.count = s.unsigned_integer("count", 1);
    if (kind == "linear") {
      grid.kind = GridSpec::Kind::Linear;
      grid.stop = s.number("stop", grid.start);
    } else if (kind == "geometric") {
      grid.kind = GridSpec::Kind::Geometric;
      grid.stop = s.number("stop", grid.start);
    } else if (kind == "doubling") {
      grid.kind = GridSpec::Kind::Doubling;
      grid.stop = grid.start;
    } else {
      throw ConfigError(s.field("kind"), "expected linear, geometric or doubling");
    }
    s.finish();
  }

  std::vector<double> values;
  with_prefix(path, [&] { values = grid.materialize(); });
  if (values.empty()) throw ConfigError(path, "grid must not be empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] <= 0.0) {
      throw ConfigError(path, "grid values must be positive and finite");
    }
    if (k > 0 && !(values[k] > values[k - 1])) {
      throw ConfigError(path, "grid must be strictly increasing");
    }
  }
  return grid;
}

json grid_to_json(const GridSpec& grid) {
  switch (grid.kind) {
    case GridSpec::Kind::Explicit: return grid.values;
    case GridSpec::Kind::Linear:
      return {{"kind", "linear"}, {"start", grid.start}, {"stop", grid.stop}, {"count", grid.count}};
    case GridSpec::Kind::Geometric:
      return {{"kind", "geometric"}, {"start", grid.start}, {"stop", grid.stop},
              {"count", grid.count}};
    case GridSpec::Kind::Doubling:
      return {{"kind", "doubling"}, {"start", grid.start}, {"count", grid.count}};
  }
  return nullptr;
}

double theta_in_range(double theta, const std::string& path) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError(path, "must lie in (0, 1]");
  return theta;
}

double positive(double value, const std::string& path) {
  if (!(value > 0.0)) throw ConfigError(path, "must be positive");
  return value;
}

Cohort fixed_cohort(std::size_t n, double cost_scale) {
  Cohort c;
  c.n_agents = n;
  c.gain = Interval::point(1.0);
  c.loss = Interval::point(1.0);
  c.success = {SuccessFamily::ExpSaturating, Interval::point(1.0)};
  c.cost = {CostFamily::Power, Interval::point(cost_scale), Interval::point(2.0)};
  return c;
}

}  // namespace

std::vector<double> doubling_grid(double start, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = std::ldexp(start, static_cast<int>(k));
  return grid;
}

std::vector<double> GridSpec::materialize() const {
  switch (kind) {
    case Kind::Explicit: return values;
    case Kind::Linear: return linear_grid(start, stop, count);
    case Kind::Geometric: return geometric_grid(start, stop, count);
    case Kind::Doubling: return doubling_grid(start, count);
  }
  return {};
}

RunConfig RunConfig::defaults() {
  RunConfig config;

  Cohort heterogeneous = fixed_cohort(1000, 0.0);
  heterogeneous.cost.scale = {0.01, 1.0};
  config.population.cohorts = {heterogeneous};
  config.market = {2.0, 0.5, false};

  Cohort muthian;
  muthian.n_agents = 1000;
  muthian.gain = {0.5, 2.0};
  muthian.loss = {0.5, 2.0};
  muthian.success = {SuccessFamily::ExpSaturating, {0.2, 5.0}};
  muthian.cost = {CostFamily::Zero, Interval::point(1.0), Interval::point(2.0)};
  config.conjectures.muthian = {PopulationSpec{{muthian}, 0}, 2.0, 1.0};

  config.conjectures.overload.population.cohorts = {fixed_cohort(500, 0.001),
                                                    fixed_cohort(500, 10.0)};
  config.conjectures.overload.i_max = 2.0;
  config.conjectures.overload.efficient_leg = {std::nullopt, 0.4};
  config.conjectures.overload.inefficient_leg = {std::nullopt, 0.6};

  config.conjectures.divergence.population.cohorts = {fixed_cohort(100, 0.01)};

  config.apply_seed(config.seed);
  return config;
}

void RunConfig::apply_seed(std::uint64_t new_seed) {
  seed = new_seed;
  population.master_seed = new_seed;
  conjectures.muthian.population.master_seed = new_seed;
  conjectures.overload.population.master_seed = new_seed;
  for (auto* leg : {&conjectures.overload.efficient_leg, &conjectures.overload.inefficient_leg}) {
    if (leg->population) leg->population->master_seed = new_seed;
  }
  conjectures.divergence.population.master_seed = new_seed;
}

RunConfig config_from_json(const json& doc) {
  RunConfig config = RunConfig::defaults();
  Section root(doc, "");
  config.seed = root.unsigned_integer("seed", config.seed);

  if (const json* v = root.get("population")) config.population = parse_population(*v, "population");

  if (const json* v = root.get("market")) {
    Section s(*v, "market");
    config.market.i_max = s.number("i_max", config.market.i_max);
    config.market.theta = s.number("theta", config.market.theta);
    config.market.participation_rule =
        s.boolean("participation_rule", config.market.participation_rule);
    s.finish();
    with_prefix("market", [&] { config.market.validate(); });
  }

  if (const json* v = root.get("trader")) {
    Section s(*v, "trader");
    auto& t = config.trader;
    const double gain = s.number("gain", t.trader.gain());
    const double loss = s.number("loss", t.trader.loss());
    SuccessCurve success = t.trader.success();
    CostCurve cost = t.trader.cost();
    if (const json* c = s.get("success")) success = parse_success_curve(*c, s.field("success"));
    if (const json* c = s.get("cost")) cost = parse_cost_curve(*c, s.field("cost"));
    with_prefix("trader", [&] { t.trader = Trader(gain, loss, success, cost); });
    t.i_max = positive(s.number("i_max", t.i_max), s.field("i_max"));
    t.curve_points = s.unsigned_integer("curve_points", t.curve_points);
    if (t.curve_points < 2) throw ConfigError(s.field("curve_points"), "must be at least 2");
    t.oracle_step = positive(s.number("oracle_step", t.oracle_step), s.field("oracle_step"));
    if (t.oracle_step > t.i_max) throw ConfigError(s.field("oracle_step"), "must not exceed i_max");
    s.finish();
  }

  if (const json* v = root.get("sweep")) {
    Section s(*v, "sweep");
    if (const json* g = s.get("i_max_grid")) config.sweep.i_max_grid = parse_grid(*g, s.field("i_max_grid"));
    if (const json* g = s.get("cost_multipliers")) {
      config.sweep.cost_multipliers = parse_grid(*g, s.field("cost_multipliers"));
    }
    s.finish();
  }

  if (const json* v = root.get("returns")) {
    Section s(*v, "returns");
    auto& r = config.returns;
    r.model.r_of = s.number("r_of", r.model.r_of);
    r.model.noise_sd = s.number("noise_sd", r.model.noise_sd);
    if (r.model.noise_sd < 0.0) throw ConfigError(s.field("noise_sd"), "must be non-negative");
    r.n = s.unsigned_integer("n", r.n);
    if (r.n < 1) throw ConfigError(s.field("n"), "must be at least 1");
    s.finish();
  }

  if (const json* v = root.get("conjectures")) {
    Section s(*v, "conjectures");
    auto& cj = config.conjectures;
    if (const json* m = s.get("muthian")) {
      Section ms(*m, s.field("muthian"));
      if (const json* p = ms.get("population")) {
        cj.muthian.population = parse_population(*p, ms.field("population"));
      }
      cj.muthian.i_max = positive(ms.number("i_max", cj.muthian.i_max), ms.field("i_max"));
      cj.muthian.theta = theta_in_range(ms.number("theta", cj.muthian.theta), ms.field("theta"));
      ms.finish();
    }
    if (const json* o = s.get("overload")) {
      Section os(*o, s.field("overload"));
      if (const json* p = os.get("population")) {
        cj.overload.population = parse_population(*p, os.field("population"));
      }
      cj.overload.i_max = positive(os.number("i_max", cj.overload.i_max), os.field("i_max"));
      for (auto [key, leg] : {std::pair{"efficient_leg", &cj.overload.efficient_leg},
                              std::pair{"inefficient_leg", &cj.overload.inefficient_leg}}) {
        const json* l = os.get(key);
        if (!l) continue;
        Section ls(*l, os.field(key));
        if (const json* p = ls.get("population")) {
          leg->population = parse_population(*p, ls.field("population"));
        }
        leg->theta = theta_in_range(ls.number("theta", leg->theta), ls.field("theta"));
        ls.finish();
      }
      os.finish();
    }
    if (const json* d = s.get("divergence")) {
      Section ds(*d, s.field("divergence"));
      if (const json* p = ds.get("population")) {
        cj.divergence.population = parse_population(*p, ds.field("population"));
      }
      cj.divergence.theta = theta_in_range(ds.number("theta", cj.divergence.theta), ds.field("theta"));
      if (const json* g = ds.get("schedule")) cj.divergence.schedule = parse_grid(*g, ds.field("schedule"));
      if (cj.divergence.schedule.materialize().size() < 10) {
        throw ConfigError(ds.field("schedule"), "needs at least 10 entries");
      }
      cj.divergence.utility_bound = ds.number("utility_bound", cj.divergence.utility_bound);
      ds.finish();
    }
    s.finish();
    require_cost_family(cj.muthian.population, true, "conjectures.muthian.population");
    require_cost_family(cj.divergence.population, false, "conjectures.divergence.population");
  }

  root.finish();
  config.apply_seed(config.seed);
  return config;
}

json config_to_json(const RunConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["population"] = population_to_json(config.population);
  doc["market"] = {{"i_max", config.market.i_max},
                   {"theta", config.market.theta},
                   {"participation_rule", config.market.participation_rule}};
  const auto& t = config.trader;
  doc["trader"] = {{"gain", t.trader.gain()},
                   {"loss", t.trader.loss()},
                   {"success", success_curve_to_json(t.trader.success())},
                   {"cost", cost_curve_to_json(t.trader.cost())},
                   {"i_max", t.i_max},
                   {"curve_points", t.curve_points},
                   {"oracle_step", t.oracle_step}};
  doc["sweep"] = {{"i_max_grid", grid_to_json(config.sweep.i_max_grid)}};
  if (config.sweep.cost_multipliers) {
    doc["sweep"]["cost_multipliers"] = grid_to_json(*config.sweep.cost_multipliers);
  }
  doc["returns"] = {{"r_of", config.returns.model.r_of},
                    {"noise_sd", config.returns.model.noise_sd},
                    {"n", config.returns.n}};

  const auto& cj = config.conjectures;
  auto leg_json = [](const LegConfig& leg) {
    json j = {{"theta", leg.theta}};
    if (leg.population) j["population"] = population_to_json(*leg.population);
    return j;
  };
  doc["conjectures"] = {
      {"muthian",
       {{"population", population_to_json(cj.muthian.population)},
        {"i_max", cj.muthian.i_max},
        {"theta", cj.muthian.theta}}},
      {"overload",
       {{"population", population_to_json(cj.overload.population)},
        {"i_max", cj.overload.i_max},
        {"efficient_leg", leg_json(cj.overload.efficient_leg)},
        {"inefficient_leg", leg_json(cj.overload.inefficient_leg)}}},
      {"divergence",
       {{"population", population_to_json(cj.divergence.population)},
        {"theta", cj.divergence.theta},
        {"schedule", grid_to_json(cj.divergence.schedule)},
        {"utility_bound", cj.divergence.utility_bound}}}};
  return doc;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigSyntaxError(path.string(), e.what());
  }
  return config_from_json(doc);
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace infoverload
