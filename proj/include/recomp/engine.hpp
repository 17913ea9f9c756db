#pragma once
// The forwards ReComp loop: ingest a change event, scope the current
// executions through provenance, estimate impact and cost, select a refresh
// plan under budget, re-enact, and append the refreshed records to history.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "recomp/config.hpp"
#include "recomp/datastore.hpp"
#include "recomp/estimate.hpp"
#include "recomp/history.hpp"
#include "recomp/patients.hpp"
#include "recomp/scope.hpp"
#include "recomp/select.hpp"

namespace recomp {

struct CandidateRow {
  std::string execution_id;
  double est_impact = 0.0;
  double est_cost = 0.0;
  bool selected = false;
  std::optional<double> true_impact;    // set when re-enacted
  std::string new_execution_id;         // set when re-enacted
  bool failed = false;                  // re-enactment failure; prior record stays current
  std::string error;
};

struct DecisionCycleReport {
  std::string event_id;
  std::size_t candidates = 0;
  std::size_t selected = 0;
  std::size_t skipped_out_of_scope = 0;
  double budget = 0.0;
  double est_total_impact = 0.0;      // the plan's total_value
  double est_total_cost = 0.0;        // the plan's total_weight
  double achieved_true_impact = 0.0;  // over re-enacted executions only
  double total_observed_cost = 0.0;   // of the re-enactments
  std::vector<CandidateRow> rows;     // sorted by execution_id
};

class Engine {
public:
  explicit Engine(EngineConfig cfg = {});

  // Attach to an initialized workdir: loads config.json (when present), all
  // dataset versions, the patient log, and the history log.
  explicit Engine(const std::filesystem::path& workdir);

  // HistoryStore points into this engine's own VersionStore.
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Create the store skeleton for a new workdir.
  static void init_workdir(const std::filesystem::path& workdir);

  // Commit a new version of a reference dataset at the current logical time.
  VersionPtr load_dataset(const std::string& dataset_id,
                          const std::vector<Record>& records);

  // Register a patient input and run its initial execution against the
  // latest dataset versions.
  ExecutionRecord register_and_execute(const PatientInput& input);

  // Commit the event's new data (inline records or diff) and resolve a fully
  // bound ChangeEvent.
  ChangeEvent ingest_event(const RawChangeEvent& raw);

  // One decision cycle: scope -> estimate -> select -> re-enact -> report.
  // Stage errors before re-enactment abort the cycle with no history writes;
  // re-enactment failures are per-execution and marked in the report.
  DecisionCycleReport handle_change_event(const ChangeEvent& ev, double budget);

  // Re-execute one selected record: changed dataset at its new version,
  // everything else at its current (latest) state. Appends and returns the
  // refreshed record.
  ExecutionRecord reenact(const ExecutionRecord& rec, const ChangeEvent& ev);

  // Ingest + handle a whole event file; with coalesce, consecutive REFERENCE
  // events to the same dataset are composed into a single cycle.
  std::vector<DecisionCycleReport> process_events(
      const std::vector<RawChangeEvent>& raws, double budget, bool coalesce);

  void save_state() const;

  const VersionStore& store() const { return store_; }
  const HistoryStore& history() const { return history_; }
  const PatientRegistry& patients() const { return patients_; }
  const EngineConfig& config() const { return cfg_; }
  EngineConfig& config() { return cfg_; }
  std::int64_t clock() const { return clock_; }

  ScopeEngine scope_engine() const { return {store_, history_, patients_}; }
  EstimateEngine estimate_engine() const {
    return {store_, history_, patients_, cfg_.estimator, cfg_.cost};
  }

private:
  std::int64_t tick() { return clock_++; }
  std::string next_execution_id();
  void persist_version(const DatasetVersion& version) const;

  EngineConfig cfg_;
  VersionStore store_;
  HistoryStore history_{store_};
  PatientRegistry patients_;
  std::int64_t clock_ = 0;
  std::uint64_t next_execution_ = 0;
  std::optional<std::filesystem::path> workdir_;
};

}  // namespace recomp
