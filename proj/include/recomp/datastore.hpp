#pragma once
// Immutable, versioned record datasets and record-level diffs between
// versions: compute, apply, compose, and measure them.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "recomp/record.hpp"

namespace recomp {

struct DatasetVersion {
  std::string dataset_id;
  std::uint64_t version_seq = 0;
  std::int64_t timestamp = 0;
  std::map<std::string, Record> records;  // keyed by Record.key

  bool content_equals(const DatasetVersion& other) const {
    return records == other.records;
  }
};

using VersionPtr = std::shared_ptr<const DatasetVersion>;

// Added/removed/updated records between two versions of one dataset. The
// three key sets are pairwise disjoint; entries are sorted by key.
struct DiffSet {
  std::string dataset_id;
  std::uint64_t from_version = 0;
  std::uint64_t to_version = 0;
  std::vector<Record> added;
  std::vector<Record> removed;
  std::vector<std::pair<Record, Record>> updated;  // (old, new), same key

  bool empty() const { return added.empty() && removed.empty() && updated.empty(); }
};

struct DiffMagnitude {
  std::size_t added = 0;
  std::size_t removed = 0;
  std::size_t updated = 0;

  bool operator==(const DiffMagnitude&) const = default;
};

// Record-level diff: added = keyed in b only, removed = keyed in a only,
// updated = keyed in both with unequal content.
DiffSet diff_versions(const DatasetVersion& a, const DatasetVersion& b);

// Patch a's records forward; strict about conflicts (adding a present key,
// removing an absent or non-matching one).
std::map<std::string, Record> apply_diff(const DatasetVersion& a, const DiffSet& diff);

// Sequential composition over adjacent version ranges; cancels add+remove
// pairs and collapses chained updates.
DiffSet compose_diffs(const DiffSet& d1, const DiffSet& d2);

DiffMagnitude diff_magnitude(const DiffSet& diff);

// Every record a provenance query can be evaluated against: added, removed,
// and both images of updated entries.
std::vector<Record> diff_evaluable_records(const DiffSet& diff);

// Stores every committed version of every dataset in full. Versions are
// immutable after commit; commits to one dataset are serialized, reads are
// safe from any thread.
class VersionStore {
public:
  // version_seq = previous + 1, or 0 for a new dataset. Rejects duplicate
  // record keys and timestamps that decrease within a dataset.
  VersionPtr commit_version(const std::string& dataset_id,
                            const std::vector<Record>& records,
                            std::int64_t timestamp);

  VersionPtr get(const std::string& dataset_id, std::uint64_t version_seq) const;
  VersionPtr latest(const std::string& dataset_id) const;  // nullptr if absent

  bool has_dataset(const std::string& dataset_id) const;
  std::uint64_t version_count(const std::string& dataset_id) const;
  std::vector<std::string> dataset_ids() const;

private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<VersionPtr>> datasets_;
};

}  // namespace recomp
