#pragma once
// Deterministic synthetic-world harness: generates GeneMap/ClinVar/patients
// from a seed, replays change events through the decision loop, and scores
// scoping and selection against the true-impact oracle.

#include <cstdint>

#include <json.hpp>

#include "recomp/config.hpp"

namespace recomp {

struct EventMix {
  double cv_add = 0.35;
  double cv_status_change = 0.20;
  double cv_remove = 0.10;
  double om_mapping_change = 0.20;
  double input_change = 0.15;
};

struct SimulationConfig {
  std::uint64_t seed = 42;
  int n_patients = 20;
  int n_genes = 50;
  int n_disease_terms = 10;
  int variants_per_patient = 100;
  int n_events = 20;
  EventMix event_mix;
  double budget_per_event = 1000.0;
  EstimatorConfig estimator;
  SolverConfig solver;

  void validate() const;  // counts positive, probabilities sum to 1
};

// Metrics summary; identical seed and config give a byte-identical dump.
nlohmann::json run_simulation(const SimulationConfig& cfg);

}  // namespace recomp
