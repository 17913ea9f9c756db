#include "recomp/config.hpp"

#include <cmath>

#include "recomp/error.hpp"
#include "recomp/json_io.hpp"
#include "recomp/simulate.hpp"

namespace recomp {

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback,
                  const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    fail(Errc::config, ctx + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

int get_count(const json& j, const char* key, int fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned()) {
    fail(Errc::config, ctx + "." + key + " must be an integer");
  }
  return j.at(key).get<int>();
}

std::string get_str(const json& j, const char* key, const std::string& fallback,
                    const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) {
    fail(Errc::config, ctx + "." + key + " must be a string");
  }
  return j.at(key).get<std::string>();
}

EstimatorConfig estimator_from(const json& root) {
  EstimatorConfig cfg;
  if (!root.contains("estimator")) return cfg;
  const json& j = root.at("estimator");
  cfg.impact = get_str(j, "impact", cfg.impact, "estimator");
  if (cfg.impact != kEstimatorScopeBinary && cfg.impact != kEstimatorRule) {
    fail(Errc::config, "estimator.impact must be '" +
                           std::string(kEstimatorScopeBinary) + "' or '" +
                           kEstimatorRule + "'");
  }
  if (j.contains("rule")) {
    cfg.benign_weight =
        get_number(j.at("rule"), "benign_weight", cfg.benign_weight, "estimator.rule");
    if (cfg.benign_weight < 0.0 || cfg.benign_weight > 1.0) {
      fail(Errc::config, "estimator.rule.benign_weight must be in [0,1]");
    }
  }
  if (j.contains("cost")) {
    cfg.default_cost_ms =
        get_number(j.at("cost"), "default_ms", cfg.default_cost_ms, "estimator.cost");
    if (cfg.default_cost_ms < 0.0) {
      fail(Errc::config, "estimator.cost.default_ms must be non-negative");
    }
  }
  return cfg;
}

SolverConfig solver_from(const json& root) {
  SolverConfig cfg;
  if (!root.contains("solver")) return cfg;
  const json& j = root.at("solver");
  cfg.mode = get_str(j, "mode", cfg.mode, "solver");
  if (cfg.mode != "auto" && cfg.mode != "exact" && cfg.mode != "greedy") {
    fail(Errc::config, "solver.mode must be auto, exact, or greedy");
  }
  cfg.granularity = get_number(j, "granularity", cfg.granularity, "solver");
  return cfg;
}

}  // namespace

EngineConfig engine_config_from_json(const json& j) {
  if (!j.is_object()) {
    fail(Errc::config, "configuration must be a JSON object");
  }
  EngineConfig cfg;
  cfg.estimator = estimator_from(j);
  cfg.solver = solver_from(j);
  if (j.contains("cost")) {
    const json& c = j.at("cost");
    cfg.cost.base_ms = get_number(c, "base_ms", cfg.cost.base_ms, "cost");
    if (c.contains("measure_wall")) {
      if (!c.at("measure_wall").is_boolean()) {
        fail(Errc::config, "cost.measure_wall must be a boolean");
      }
      cfg.cost.measure_wall = c.at("measure_wall").get<bool>();
    }
  }
  return cfg;
}

SimulationConfig simulation_config_from_json(const json& j) {
  if (!j.is_object()) {
    fail(Errc::config, "configuration must be a JSON object");
  }
  SimulationConfig cfg;
  cfg.estimator = estimator_from(j);
  cfg.solver = solver_from(j);

  const json& sim = j.contains("simulation") ? j.at("simulation") : j;
  const std::string ctx = "simulation";
  if (sim.contains("seed")) {
    cfg.seed = sim.at("seed").get<std::uint64_t>();
  }
  cfg.n_patients = get_count(sim, "n_patients", cfg.n_patients, ctx);
  cfg.n_genes = get_count(sim, "n_genes", cfg.n_genes, ctx);
  cfg.n_disease_terms = get_count(sim, "n_disease_terms", cfg.n_disease_terms, ctx);
  cfg.variants_per_patient =
      get_count(sim, "variants_per_patient", cfg.variants_per_patient, ctx);
  cfg.n_events = get_count(sim, "n_events", cfg.n_events, ctx);
  cfg.budget_per_event =
      get_number(sim, "budget_per_event", cfg.budget_per_event, ctx);
  if (sim.contains("event_mix")) {
    const json& mix = sim.at("event_mix");
    cfg.event_mix.cv_add = get_number(mix, "cv_add", cfg.event_mix.cv_add, "event_mix");
    cfg.event_mix.cv_status_change =
        get_number(mix, "cv_status_change", cfg.event_mix.cv_status_change, "event_mix");
    cfg.event_mix.cv_remove =
        get_number(mix, "cv_remove", cfg.event_mix.cv_remove, "event_mix");
    cfg.event_mix.om_mapping_change =
        get_number(mix, "om_mapping_change", cfg.event_mix.om_mapping_change, "event_mix");
    cfg.event_mix.input_change =
        get_number(mix, "input_change", cfg.event_mix.input_change, "event_mix");
  }
  cfg.validate();
  return cfg;
}

void SimulationConfig::validate() const {
  if (n_patients < 1 || n_genes < 1 || n_disease_terms < 1 ||
      variants_per_patient < 1) {
    fail(Errc::config, "simulation: world counts must be positive");
  }
  if (n_events < 0) {
    fail(Errc::config, "simulation: n_events must be non-negative");
  }
  if (!(budget_per_event >= 0) || !std::isfinite(budget_per_event)) {
    fail(Errc::config, "simulation: budget_per_event must be finite and non-negative");
  }
  const double probs[] = {event_mix.cv_add, event_mix.cv_status_change,
                          event_mix.cv_remove, event_mix.om_mapping_change,
                          event_mix.input_change};
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) {
      fail(Errc::config, "simulation: event_mix probabilities must be in [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(Errc::config, "simulation: event_mix probabilities must sum to 1");
  }
}

}  // namespace recomp
