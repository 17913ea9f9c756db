#include "recomp/scope.hpp"

#include <algorithm>

#include "recomp/error.hpp"
#include "recomp/svi.hpp"

namespace recomp {

std::optional<ProvenanceQuery> ScopeEngine::scoping_query(
    const ExecutionRecord& rec, const std::string& dataset_id) const {
  auto it = rec.provenance.find(dataset_id);
  if (it == rec.provenance.end()) return std::nullopt;
  if (dataset_id == kClinVarDataset) {
    // The ClinVar query is derived from GeneMap, so the stored terms may be
    // stale; refresh against the current GeneMap version before scoping.
    if (VersionPtr om = store_->latest(kGeneMapDataset)) {
      return refresh_query(rec, dataset_id, *om);
    }
  }
  return it->second;
}

ProvenanceQuery ScopeEngine::refresh_query(const ExecutionRecord& rec,
                                           const std::string& dataset_id,
                                           const DatasetVersion& current_om) const {
  if (dataset_id != kClinVarDataset) {
    fail(Errc::config,
         "refresh_query: only the '" + std::string(kClinVarDataset) +
             "' query is derived; got '" + dataset_id + "'");
  }
  auto stored = rec.provenance.find(dataset_id);
  if (stored == rec.provenance.end()) {
    fail(Errc::data_integrity, "refresh_query: execution '" + rec.execution_id +
                                   "' has no stored query for '" + dataset_id + "'");
  }
  auto input = patients_->get(rec.subject_id, rec.input_version);
  if (!input) {
    fail(Errc::not_found, "refresh_query: phenotype of subject '" + rec.subject_id +
                              "' (input v" + std::to_string(rec.input_version) +
                              ") unavailable");
  }

  ProvenanceQuery refreshed = stored->second;
  const std::set<std::string> targets = target_genes(input->phenotype, current_om);
  refreshed.terms.insert(targets.begin(), targets.end());
  return refreshed;
}

DiffSet ScopeEngine::effective_diff(const ExecutionRecord& rec,
                                    const ReferenceChange& ch) const {
  auto binding = rec.dataset_bindings.find(ch.dataset_id);
  if (binding == rec.dataset_bindings.end()) {
    fail(Errc::data_integrity, "effective_diff: execution '" + rec.execution_id +
                                   "' has no binding for '" + ch.dataset_id + "'");
  }
  if (binding->second == ch.from_version) return ch.diff;

  // The execution lags behind the event's base version (it was skipped in
  // earlier cycles), so the relevant change is everything between the version
  // it used and the new one.
  VersionPtr from = store_->get(ch.dataset_id, binding->second);
  VersionPtr to = store_->get(ch.dataset_id, ch.to_version);
  if (!from || !to) {
    fail(Errc::data_integrity, "effective_diff: missing committed versions of '" +
                                   ch.dataset_id + "'");
  }
  return diff_versions(*from, *to);
}

bool ScopeEngine::in_scope(const ExecutionRecord& rec,
                           const ReferenceChange& ch) const {
  auto binding = rec.dataset_bindings.find(ch.dataset_id);
  if (binding == rec.dataset_bindings.end()) return false;
  if (binding->second >= ch.to_version) return false;

  std::optional<ProvenanceQuery> query = scoping_query(rec, ch.dataset_id);
  if (!query) return false;

  const DiffSet diff = effective_diff(rec, ch);
  for (const Record& r : diff_evaluable_records(diff)) {
    if (query_matches(*query, r)) return true;
  }
  return false;
}

std::vector<ExecutionRecord> ScopeEngine::scope_change(const ChangeEvent& ev,
                                                       std::int64_t at) const {
  std::vector<ExecutionRecord> out;

  if (!ev.is_reference()) {
    const InputChange& ch = ev.input();
    if (!patients_->has(ch.subject_id)) {
      fail(Errc::not_found,
           "scope_change: unknown subject '" + ch.subject_id + "'");
    }
    auto current = history_->current_for_subject(ch.subject_id, at);
    if (!current) {
      fail(Errc::not_found, "scope_change: subject '" + ch.subject_id +
                                "' has no current execution");
    }
    out.push_back(*current);
    return out;
  }

  const ReferenceChange& ch = ev.reference();
  if (!store_->has_dataset(ch.dataset_id)) {
    fail(Errc::not_found, "scope_change: unknown dataset '" + ch.dataset_id + "'");
  }
  if (!store_->get(ch.dataset_id, ch.to_version)) {
    fail(Errc::data_integrity, "scope_change: version v" +
                                   std::to_string(ch.to_version) + " of '" +
                                   ch.dataset_id + "' is not committed");
  }

  for (const ExecutionRecord& rec : history_->current_outputs(at)) {
    if (in_scope(rec, ch)) out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const ExecutionRecord& a, const ExecutionRecord& b) {
              return a.execution_id < b.execution_id;
            });
  return out;
}

}  // namespace recomp
