#pragma once
// Change events over reference datasets or patient inputs, and the
// provenance-driven scoping pass: which current executions can a change
// possibly affect. Executions outside the returned scope are guaranteed
// zero-impact for the event.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "recomp/datastore.hpp"
#include "recomp/history.hpp"
#include "recomp/patients.hpp"

namespace recomp {

struct ReferenceChange {
  std::string dataset_id;
  std::uint64_t from_version = 0;
  std::uint64_t to_version = 0;
  DiffSet diff;
};

struct InputChange {
  std::string subject_id;
  PatientInput new_input;
};

struct ChangeEvent {
  std::string event_id;
  std::int64_t timestamp = 0;
  std::variant<ReferenceChange, InputChange> change;

  bool is_reference() const { return std::holds_alternative<ReferenceChange>(change); }
  const ReferenceChange& reference() const { return std::get<ReferenceChange>(change); }
  const InputChange& input() const { return std::get<InputChange>(change); }
};

// Wire form of a change event, one JSON object per line. REFERENCE events
// carry either a precomputed diff or the new full version inline ("records");
// ingestion commits the data and resolves the diff.
struct RawChangeEvent {
  std::string event_id;
  std::optional<std::int64_t> timestamp;
  std::string kind;  // "REFERENCE" | "INPUT"
  std::string dataset_id;
  std::optional<DiffSet> diff;
  std::optional<std::vector<Record>> records;
  std::optional<PatientInput> input;
};

class ScopeEngine {
public:
  ScopeEngine(const VersionStore& store, const HistoryStore& history,
              const PatientRegistry& patients)
      : store_(&store), history_(&history), patients_(&patients) {}

  // INPUT events scope to exactly the subject's current execution. REFERENCE
  // events scope to every current execution whose (refreshed) query for the
  // changed dataset matches a record of the diff between the version that
  // execution used and the event's new version. Sorted by execution_id.
  std::vector<ExecutionRecord> scope_change(const ChangeEvent& ev,
                                            std::int64_t at) const;

  // Derived-query refresh for the ClinVar query: target genes recomputed
  // against the current GeneMap version, unioned with the stored terms so the
  // refresh can only widen the scope.
  ProvenanceQuery refresh_query(const ExecutionRecord& rec,
                                const std::string& dataset_id,
                                const DatasetVersion& current_om) const;

  // Diff between the version this execution actually used and the event's
  // new version. Coincides with the event's own diff when the execution is
  // bound at from_version.
  DiffSet effective_diff(const ExecutionRecord& rec, const ReferenceChange& ch) const;

  // The query used for scoping `rec` against a change to `ch.dataset_id`
  // (refreshed when applicable); nullopt when the execution never consulted
  // the dataset.
  std::optional<ProvenanceQuery> scoping_query(const ExecutionRecord& rec,
                                               const std::string& dataset_id) const;

  bool in_scope(const ExecutionRecord& rec, const ReferenceChange& ch) const;

private:
  const VersionStore* store_;
  const HistoryStore* history_;
  const PatientRegistry* patients_;
};

}  // namespace recomp
