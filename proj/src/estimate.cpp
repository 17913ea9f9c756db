#include "recomp/estimate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "recomp/error.hpp"
#include "recomp/svi.hpp"

namespace recomp {

namespace {

std::optional<std::string> record_status(const Record& r) {
  const AttrValue* value = find_attr(r, kStatusAttr);
  if (value == nullptr) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(value)) return *s;
  return std::nullopt;
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

TrueImpact EstimateEngine::true_impact(const ExecutionRecord& rec,
                                       const ChangeEvent& ev) const {
  // Bindings per Eq-4 style single-change construction: the changed dataset
  // moves to the event's new version, everything else stays as recorded.
  std::map<std::string, std::uint64_t> bindings = rec.dataset_bindings;
  std::optional<PatientInput> input;

  if (ev.is_reference()) {
    const ReferenceChange& ch = ev.reference();
    if (bindings.contains(ch.dataset_id)) {
      bindings[ch.dataset_id] = ch.to_version;
    }
    input = patients_->get(rec.subject_id, rec.input_version);
    if (!input) {
      fail(Errc::not_found, "true_impact: input v" +
                                std::to_string(rec.input_version) + " of subject '" +
                                rec.subject_id + "' unavailable");
    }
  } else {
    const InputChange& ch = ev.input();
    if (ch.subject_id == rec.subject_id) {
      input = ch.new_input;
    } else {
      input = patients_->get(rec.subject_id, rec.input_version);
      if (!input) {
        fail(Errc::not_found, "true_impact: input v" +
                                  std::to_string(rec.input_version) +
                                  " of subject '" + rec.subject_id + "' unavailable");
      }
    }
  }

  auto version_for = [&](const char* dataset_id) -> VersionPtr {
    auto it = bindings.find(dataset_id);
    if (it == bindings.end()) {
      fail(Errc::data_integrity, "true_impact: execution '" + rec.execution_id +
                                     "' has no binding for '" + dataset_id + "'");
    }
    VersionPtr v = store_->get(dataset_id, it->second);
    if (!v) {
      fail(Errc::data_integrity, "true_impact: missing version " +
                                     std::string(dataset_id) + "@v" +
                                     std::to_string(it->second));
    }
    return v;
  };

  VersionPtr om = version_for(kGeneMapDataset);
  VersionPtr cv = version_for(kClinVarDataset);

  CostOptions cost{cost_model_.measure_wall, cost_model_.base_for(rec.subject_id)};
  SviResult result = exec_svi(*input, *om, *cv, ev.timestamp, cost);

  TrueImpact out;
  out.impact = impact_binary(diff_diagnosis(rec.output, result.diagnosis));
  out.refreshed = std::move(result.diagnosis);
  out.cost = result.cost_ms;
  return out;
}

ImpactEstimate EstimateEngine::estimate_impact(const ExecutionRecord& rec,
                                               const ChangeEvent& ev,
                                               const std::string& estimator_id) const {
  ImpactEstimate out{rec.execution_id, 0.0, estimator_id};

  if (estimator_id == kEstimatorScopeBinary) {
    out.value = 1.0;
    return out;
  }

  if (estimator_id == kEstimatorRule) {
    if (!ev.is_reference()) {
      // Input changes carry no diff to inspect; always worth re-computing.
      out.value = 1.0;
      return out;
    }
    const ReferenceChange& ch = ev.reference();
    std::optional<ProvenanceQuery> query = scope_.scoping_query(rec, ch.dataset_id);
    bool pathogenic = false;
    if (query) {
      const DiffSet diff = scope_.effective_diff(rec, ch);
      for (const Record& r : diff.added) {
        if (query_matches(*query, r) &&
            record_status(r) == kStatusPathogenic) {
          pathogenic = true;
          break;
        }
      }
      if (!pathogenic) {
        for (const auto& [old_rec, new_rec] : diff.updated) {
          if (!query_matches(*query, old_rec) && !query_matches(*query, new_rec)) {
            continue;
          }
          if (record_status(new_rec) == kStatusPathogenic &&
              record_status(old_rec) != kStatusPathogenic) {
            pathogenic = true;
            break;
          }
        }
      }
    }
    out.value = pathogenic ? 1.0 : std::clamp(cfg_.benign_weight, 0.0, 1.0);
    return out;
  }

  fail(Errc::config, "unknown impact estimator '" + estimator_id + "'");
}

ImpactEstimate EstimateEngine::estimate_impact(const ExecutionRecord& rec,
                                               const ChangeEvent& ev) const {
  return estimate_impact(rec, ev, cfg_.impact);
}

CostEstimate EstimateEngine::estimate_cost(const ExecutionRecord& rec) const {
  CostEstimate out{rec.execution_id, cfg_.default_cost_ms, kEstimatorHistoricalMean};
  const std::vector<double> subject_costs = history_->observed_costs(rec.subject_id);
  if (!subject_costs.empty()) {
    out.value = mean(subject_costs);
    return out;
  }
  const std::vector<double> all_costs = history_->observed_costs_all();
  if (!all_costs.empty()) {
    out.value = mean(all_costs);
  }
  return out;
}

}  // namespace recomp
