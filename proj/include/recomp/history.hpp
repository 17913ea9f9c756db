#pragma once
// Append-only execution history: outputs, observed costs, dataset-version
// bindings, and intensional provenance. Supports "current outcome" queries
// and JSONL persistence (history.log.jsonl, one record per line).

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "recomp/datastore.hpp"
#include "recomp/provenance.hpp"
#include "recomp/svi.hpp"

namespace recomp {

struct ExecutionRecord {
  std::string execution_id;
  std::string process_id;
  std::string subject_id;
  std::uint64_t input_version = 0;
  std::map<std::string, std::uint64_t> dataset_bindings;  // dataset_id -> version_seq
  Diagnosis output;
  double observed_cost = 0.0;  // milliseconds
  std::int64_t timestamp = 0;
  std::map<std::string, ProvenanceQuery> provenance;  // dataset_id -> query

  bool operator==(const ExecutionRecord&) const = default;
};

// Records are immutable once appended; there is no mutation or deletion path.
// Appends are serialized through one writer; reads return copies.
class HistoryStore {
public:
  explicit HistoryStore(const VersionStore& store) : store_(&store) {}

  // Load an existing log (validating every line) and append future records
  // to it. Call before any append.
  void attach_log(const std::filesystem::path& file);

  // Rejects duplicate execution ids, dangling dataset-version references,
  // and provenance entries for unbound datasets.
  void append_execution(const ExecutionRecord& rec);

  // Exactly one record per subject: the latest with timestamp <= at; ties on
  // equal timestamps go to the higher execution_id. Sorted by subject_id.
  std::vector<ExecutionRecord> current_outputs(std::int64_t at) const;

  std::optional<ExecutionRecord> current_for_subject(const std::string& subject_id,
                                                     std::int64_t at) const;
  std::optional<ExecutionRecord> find(const std::string& execution_id) const;

  std::vector<double> observed_costs(const std::string& subject_id) const;
  std::vector<double> observed_costs_all() const;

  std::vector<ExecutionRecord> all() const;
  std::size_t size() const;

private:
  const ExecutionRecord* current_locked(const std::string& subject_id,
                                        std::int64_t at) const;

  const VersionStore* store_;
  std::deque<ExecutionRecord> log_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<std::size_t>> by_subject_;
  std::optional<std::filesystem::path> log_file_;
  mutable std::mutex mu_;
};

}  // namespace recomp
