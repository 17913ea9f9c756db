#pragma once
// Impact estimates (v_i) and cost estimates (w_i) for in-scope executions,
// plus the ground-truth oracle that measures impact by actually re-executing
// the pipeline with the changed data.

#include <memory>
#include <string>

#include "recomp/config.hpp"
#include "recomp/history.hpp"
#include "recomp/patients.hpp"
#include "recomp/scope.hpp"

namespace recomp {

struct ImpactEstimate {
  std::string execution_id;
  double value = 0.0;  // in [0,1]
  std::string estimator_id;
};

struct CostEstimate {
  std::string execution_id;
  double value = 0.0;  // milliseconds, >= 0
  std::string estimator_id;
};

struct TrueImpact {
  double impact = 0.0;  // binary ground truth
  Diagnosis refreshed;
  double cost = 0.0;  // observed cost of the oracle re-execution
};

// Named impact estimators behind one interface so further estimators can be
// added without structural change.
class ImpactEstimator {
public:
  virtual ~ImpactEstimator() = default;
  virtual double estimate(const ExecutionRecord& rec, const ChangeEvent& ev,
                          const ScopeEngine& scope) const = 0;
};

class EstimateEngine {
public:
  EstimateEngine(const VersionStore& store, const HistoryStore& history,
                 const PatientRegistry& patients, EstimatorConfig cfg,
                 CostModel cost_model)
      : store_(&store),
        history_(&history),
        patients_(&patients),
        scope_(store, history, patients),
        cfg_(std::move(cfg)),
        cost_model_(std::move(cost_model)) {}

  // Re-executes with the changed dataset at the event's to_version and every
  // other binding exactly as recorded (for INPUT events: the new input with
  // the recorded dataset bindings); impact = impact_binary of the diagnosis
  // diff. Evaluation oracle and post-re-computation bookkeeping.
  TrueImpact true_impact(const ExecutionRecord& rec, const ChangeEvent& ev) const;

  // "scope-binary": 1.0 for any in-scope record. "rule": 1.0 when the matched
  // diff records bring a pathogenic status (new or newly pathogenic), else
  // the configured benign weight.
  ImpactEstimate estimate_impact(const ExecutionRecord& rec, const ChangeEvent& ev,
                                 const std::string& estimator_id) const;
  ImpactEstimate estimate_impact(const ExecutionRecord& rec,
                                 const ChangeEvent& ev) const;  // configured id

  // Mean observed cost of the subject's past executions, else the global
  // mean, else the configured default.
  CostEstimate estimate_cost(const ExecutionRecord& rec) const;

  const ScopeEngine& scope() const { return scope_; }

private:
  const VersionStore* store_;
  const HistoryStore* history_;
  const PatientRegistry* patients_;
  ScopeEngine scope_;
  EstimatorConfig cfg_;
  CostModel cost_model_;
};

}  // namespace recomp
