#include "recomp/datastore.hpp"

#include <algorithm>
#include <optional>

#include "recomp/error.hpp"

namespace recomp {

namespace {

void require_same_dataset(const std::string& a, const std::string& b,
                          const char* what) {
  if (a != b) {
    fail(Errc::version_conflict,
         std::string(what) + ": dataset_id mismatch ('" + a + "' vs '" + b + "')");
  }
}

// Per-key change used when composing diffs.
struct Op {
  enum Kind { add, remove, update } kind;
  Record old_rec;  // remove, update
  Record new_rec;  // add, update
};

std::map<std::string, Op> ops_of(const DiffSet& d) {
  std::map<std::string, Op> ops;
  for (const auto& r : d.added) ops.emplace(r.key, Op{Op::add, {}, r});
  for (const auto& r : d.removed) ops.emplace(r.key, Op{Op::remove, r, {}});
  for (const auto& [o, n] : d.updated) ops.emplace(o.key, Op{Op::update, o, n});
  return ops;
}

void push_op(DiffSet& out, const std::string& key, const Op& op) {
  switch (op.kind) {
    case Op::add: out.added.push_back(op.new_rec); break;
    case Op::remove: out.removed.push_back(op.old_rec); break;
    case Op::update: out.updated.emplace_back(op.old_rec, op.new_rec); break;
  }
  (void)key;
}

}  // namespace

DiffSet diff_versions(const DatasetVersion& a, const DatasetVersion& b) {
  require_same_dataset(a.dataset_id, b.dataset_id, "diff_versions");
  if (a.version_seq >= b.version_seq) {
    fail(Errc::version_conflict,
         "diff_versions: from version " + std::to_string(a.version_seq) +
             " is not older than " + std::to_string(b.version_seq));
  }

  DiffSet out;
  out.dataset_id = a.dataset_id;
  out.from_version = a.version_seq;
  out.to_version = b.version_seq;

  for (const auto& [key, rec] : b.records) {
    auto it = a.records.find(key);
    if (it == a.records.end()) {
      out.added.push_back(rec);
    } else if (it->second != rec) {
      out.updated.emplace_back(it->second, rec);
    }
  }
  for (const auto& [key, rec] : a.records) {
    if (!b.records.contains(key)) out.removed.push_back(rec);
  }
  return out;
}

std::map<std::string, Record> apply_diff(const DatasetVersion& a, const DiffSet& diff) {
  require_same_dataset(a.dataset_id, diff.dataset_id, "apply_diff");
  if (diff.from_version != a.version_seq) {
    fail(Errc::patch_conflict,
         "apply_diff: diff starts at version " + std::to_string(diff.from_version) +
             " but the base is version " + std::to_string(a.version_seq));
  }

  std::map<std::string, Record> out = a.records;
  for (const auto& rec : diff.removed) {
    auto it = out.find(rec.key);
    if (it == out.end() || it->second != rec) {
      fail(Errc::patch_conflict, "apply_diff: removal of key '" + rec.key +
                                     "' does not match the base version");
    }
    out.erase(it);
  }
  for (const auto& [old_rec, new_rec] : diff.updated) {
    auto it = out.find(old_rec.key);
    if (it == out.end() || it->second != old_rec) {
      fail(Errc::patch_conflict, "apply_diff: update of key '" + old_rec.key +
                                     "' does not match the base version");
    }
    it->second = new_rec;
  }
  for (const auto& rec : diff.added) {
    auto [it, inserted] = out.emplace(rec.key, rec);
    if (!inserted) {
      fail(Errc::patch_conflict,
           "apply_diff: added key '" + rec.key + "' already present");
    }
  }
  return out;
}

DiffSet compose_diffs(const DiffSet& d1, const DiffSet& d2) {
  require_same_dataset(d1.dataset_id, d2.dataset_id, "compose_diffs");
  if (d1.to_version != d2.from_version) {
    fail(Errc::version_conflict,
         "compose_diffs: ranges are not adjacent (" + std::to_string(d1.to_version) +
             " vs " + std::to_string(d2.from_version) + ")");
  }

  const auto ops1 = ops_of(d1);
  const auto ops2 = ops_of(d2);

  DiffSet out;
  out.dataset_id = d1.dataset_id;
  out.from_version = d1.from_version;
  out.to_version = d2.to_version;

  for (const auto& [key, op1] : ops1) {
    auto it2 = ops2.find(key);
    if (it2 == ops2.end()) {
      push_op(out, key, op1);
      continue;
    }
    const Op& op2 = it2->second;
    auto incoherent = [&]() -> Op {
      fail(Errc::patch_conflict,
           "compose_diffs: incoherent change sequence for key '" + key + "'");
    };
    std::optional<Op> combined;
    switch (op1.kind) {
      case Op::add:
        switch (op2.kind) {
          case Op::update: combined = Op{Op::add, {}, op2.new_rec}; break;
          case Op::remove: combined.reset(); break;  // add then remove cancels
          case Op::add: incoherent();
        }
        break;
      case Op::update:
        switch (op2.kind) {
          case Op::update:
            if (op1.old_rec == op2.new_rec) {
              combined.reset();  // back to the original content
            } else {
              combined = Op{Op::update, op1.old_rec, op2.new_rec};
            }
            break;
          case Op::remove: combined = Op{Op::remove, op1.old_rec, {}}; break;
          case Op::add: incoherent();
        }
        break;
      case Op::remove:
        switch (op2.kind) {
          case Op::add:
            if (op1.old_rec == op2.new_rec) {
              combined.reset();
            } else {
              combined = Op{Op::update, op1.old_rec, op2.new_rec};
            }
            break;
          case Op::update:
          case Op::remove: incoherent();
        }
        break;
    }
    if (combined) push_op(out, key, *combined);
  }
  for (const auto& [key, op2] : ops2) {
    if (!ops1.contains(key)) push_op(out, key, op2);
  }

  auto by_key = [](const auto& x, const auto& y) { return x.key < y.key; };
  std::sort(out.added.begin(), out.added.end(), by_key);
  std::sort(out.removed.begin(), out.removed.end(), by_key);
  std::sort(out.updated.begin(), out.updated.end(),
            [](const auto& x, const auto& y) { return x.first.key < y.first.key; });
  return out;
}

DiffMagnitude diff_magnitude(const DiffSet& diff) {
  return {diff.added.size(), diff.removed.size(), diff.updated.size()};
}

std::vector<Record> diff_evaluable_records(const DiffSet& diff) {
  std::vector<Record> out;
  out.reserve(diff.added.size() + diff.removed.size() + 2 * diff.updated.size());
  out.insert(out.end(), diff.added.begin(), diff.added.end());
  out.insert(out.end(), diff.removed.begin(), diff.removed.end());
  for (const auto& [old_rec, new_rec] : diff.updated) {
    out.push_back(old_rec);
    out.push_back(new_rec);
  }
  return out;
}

VersionPtr VersionStore::commit_version(const std::string& dataset_id,
                                        const std::vector<Record>& records,
                                        std::int64_t timestamp) {
  auto version = std::make_shared<DatasetVersion>();
  version->dataset_id = dataset_id;
  version->timestamp = timestamp;
  for (const auto& rec : records) {
    if (rec.key.empty()) {
      fail(Errc::data_integrity, "commit_version: empty record key");
    }
    auto [it, inserted] = version->records.emplace(rec.key, rec);
    if (!inserted) {
      fail(Errc::key_conflict,
           "commit_version: duplicate key '" + rec.key + "' in dataset '" +
               dataset_id + "'");
    }
  }

  std::lock_guard lock(mu_);
  auto& chain = datasets_[dataset_id];
  if (!chain.empty()) {
    if (timestamp < chain.back()->timestamp) {
      fail(Errc::version_conflict,
           "commit_version: timestamp " + std::to_string(timestamp) +
               " precedes latest commit of dataset '" + dataset_id + "'");
    }
    version->version_seq = chain.back()->version_seq + 1;
  }
  chain.push_back(version);
  return version;
}

VersionPtr VersionStore::get(const std::string& dataset_id,
                             std::uint64_t version_seq) const {
  std::lock_guard lock(mu_);
  auto it = datasets_.find(dataset_id);
  if (it == datasets_.end() || version_seq >= it->second.size()) return nullptr;
  return it->second[version_seq];
}

VersionPtr VersionStore::latest(const std::string& dataset_id) const {
  std::lock_guard lock(mu_);
  auto it = datasets_.find(dataset_id);
  if (it == datasets_.end() || it->second.empty()) return nullptr;
  return it->second.back();
}

bool VersionStore::has_dataset(const std::string& dataset_id) const {
  std::lock_guard lock(mu_);
  return datasets_.contains(dataset_id);
}

std::uint64_t VersionStore::version_count(const std::string& dataset_id) const {
  std::lock_guard lock(mu_);
  auto it = datasets_.find(dataset_id);
  return it == datasets_.end() ? 0 : it->second.size();
}

std::vector<std::string> VersionStore::dataset_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  out.reserve(datasets_.size());
  for (const auto& [id, chain] : datasets_) out.push_back(id);
  return out;
}

}  // namespace recomp
