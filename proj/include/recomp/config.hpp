#pragma once
// Engine configuration: estimator selection, solver tuning, and the cost
// model applied to pipeline executions.

#include <map>
#include <string>

namespace recomp {

inline constexpr const char* kEstimatorScopeBinary = "scope-binary";
inline constexpr const char* kEstimatorRule = "rule";
inline constexpr const char* kEstimatorHistoricalMean = "historical-mean";

struct EstimatorConfig {
  std::string impact = kEstimatorScopeBinary;  // estimator.impact
  double benign_weight = 0.5;                  // estimator.rule.benign_weight
  double default_cost_ms = 250.0;              // estimator.cost.default_ms
};

struct SolverConfig {
  std::string mode = "auto";  // solver.mode: auto | exact | greedy
  double granularity = 0.0;   // solver.granularity; <= 0 selects budget/1e4
};

// Execution cost: measured wall-clock plus a synthetic base. The simulation
// harness disables measurement and assigns one deterministic base per
// subject, so its metrics are reproducible byte for byte.
struct CostModel {
  bool measure_wall = true;
  double base_ms = 0.0;
  std::map<std::string, double> per_subject_base;

  double base_for(const std::string& subject_id) const {
    auto it = per_subject_base.find(subject_id);
    return it == per_subject_base.end() ? base_ms : it->second;
  }
};

struct EngineConfig {
  EstimatorConfig estimator;
  SolverConfig solver;
  CostModel cost;
};

}  // namespace recomp
