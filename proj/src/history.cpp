#include "recomp/history.hpp"

#include <algorithm>

#include "recomp/error.hpp"
#include "recomp/json_io.hpp"

namespace recomp {

namespace {

void validate_against_store(const ExecutionRecord& rec, const VersionStore& store) {
  if (rec.execution_id.empty()) {
    fail(Errc::data_integrity, "execution record: empty execution_id");
  }
  if (rec.subject_id.empty()) {
    fail(Errc::data_integrity,
         "execution '" + rec.execution_id + "': empty subject_id");
  }
  for (const auto& [dataset_id, seq] : rec.dataset_bindings) {
    if (store.get(dataset_id, seq) == nullptr) {
      fail(Errc::data_integrity, "execution '" + rec.execution_id +
                                     "': dangling binding " + dataset_id + "@v" +
                                     std::to_string(seq));
    }
  }
  for (const auto& [dataset_id, q] : rec.provenance) {
    if (!rec.dataset_bindings.contains(dataset_id)) {
      fail(Errc::data_integrity, "execution '" + rec.execution_id +
                                     "': provenance for unbound dataset '" +
                                     dataset_id + "'");
    }
    if (q.dataset_id != dataset_id) {
      fail(Errc::data_integrity, "execution '" + rec.execution_id +
                                     "': provenance query dataset mismatch");
    }
  }
}

}  // namespace

void HistoryStore::attach_log(const std::filesystem::path& file) {
  std::lock_guard lock(mu_);
  if (!log_.empty()) {
    fail(Errc::config, "history: attach_log must precede appends");
  }
  log_file_ = file;
  if (!std::filesystem::exists(file)) return;
  for (const auto& line : io::read_jsonl(file)) {
    ExecutionRecord rec = io::execution_from_json(line);
    validate_against_store(rec, *store_);
    if (by_id_.contains(rec.execution_id)) {
      fail(Errc::data_integrity,
           "history log: duplicate execution_id '" + rec.execution_id + "'");
    }
    by_id_.emplace(rec.execution_id, log_.size());
    by_subject_[rec.subject_id].push_back(log_.size());
    log_.push_back(std::move(rec));
  }
}

void HistoryStore::append_execution(const ExecutionRecord& rec) {
  validate_against_store(rec, *store_);
  std::lock_guard lock(mu_);
  if (by_id_.contains(rec.execution_id)) {
    fail(Errc::data_integrity,
         "history: duplicate execution_id '" + rec.execution_id + "'");
  }
  by_id_.emplace(rec.execution_id, log_.size());
  by_subject_[rec.subject_id].push_back(log_.size());
  log_.push_back(rec);
  if (log_file_) {
    io::append_jsonl(*log_file_, io::to_json(rec));
  }
}

const ExecutionRecord* HistoryStore::current_locked(const std::string& subject_id,
                                                    std::int64_t at) const {
  auto it = by_subject_.find(subject_id);
  if (it == by_subject_.end()) return nullptr;
  const ExecutionRecord* best = nullptr;
  for (std::size_t index : it->second) {
    const ExecutionRecord& rec = log_[index];
    if (rec.timestamp > at) continue;
    if (best == nullptr || rec.timestamp > best->timestamp ||
        (rec.timestamp == best->timestamp &&
         rec.execution_id > best->execution_id)) {
      best = &rec;
    }
  }
  return best;
}

std::vector<ExecutionRecord> HistoryStore::current_outputs(std::int64_t at) const {
  std::lock_guard lock(mu_);
  std::vector<ExecutionRecord> out;
  for (const auto& [subject, indices] : by_subject_) {
    if (const ExecutionRecord* rec = current_locked(subject, at)) {
      out.push_back(*rec);
    }
  }
  return out;
}

std::optional<ExecutionRecord> HistoryStore::current_for_subject(
    const std::string& subject_id, std::int64_t at) const {
  std::lock_guard lock(mu_);
  if (const ExecutionRecord* rec = current_locked(subject_id, at)) return *rec;
  return std::nullopt;
}

std::optional<ExecutionRecord> HistoryStore::find(
    const std::string& execution_id) const {
  std::lock_guard lock(mu_);
  auto it = by_id_.find(execution_id);
  if (it == by_id_.end()) return std::nullopt;
  return log_[it->second];
}

std::vector<double> HistoryStore::observed_costs(const std::string& subject_id) const {
  std::lock_guard lock(mu_);
  std::vector<double> out;
  auto it = by_subject_.find(subject_id);
  if (it == by_subject_.end()) return out;
  for (std::size_t index : it->second) out.push_back(log_[index].observed_cost);
  return out;
}

std::vector<double> HistoryStore::observed_costs_all() const {
  std::lock_guard lock(mu_);
  std::vector<double> out;
  out.reserve(log_.size());
  for (const auto& rec : log_) out.push_back(rec.observed_cost);
  return out;
}

std::vector<ExecutionRecord> HistoryStore::all() const {
  std::lock_guard lock(mu_);
  return {log_.begin(), log_.end()};
}

std::size_t HistoryStore::size() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

}  // namespace recomp
