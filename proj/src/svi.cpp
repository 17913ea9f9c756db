#include "recomp/svi.hpp"

#include <chrono>
#include <set>

#include "recomp/error.hpp"

namespace recomp {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void require_dataset(const DatasetVersion& v, const char* expected_id,
                     const char* op) {
  if (v.dataset_id != expected_id) {
    fail(Errc::config, std::string(op) + ": expected dataset '" + expected_id +
                           "' but got '" + v.dataset_id + "'");
  }
}

}  // namespace

std::string to_string(TrafficLight c) {
  switch (c) {
    case TrafficLight::red: return "red";
    case TrafficLight::amber: return "amber";
    case TrafficLight::green: return "green";
  }
  fail(Errc::data_integrity, "invalid traffic light value");
}

TrafficLight traffic_light_from_string(const std::string& s) {
  if (s == "red") return TrafficLight::red;
  if (s == "amber") return TrafficLight::amber;
  if (s == "green") return TrafficLight::green;
  fail(Errc::data_integrity, "invalid traffic light class '" + s + "'");
}

Phenotype Phenotype::of(std::vector<std::string> raw_terms) {
  Phenotype ph;
  for (const auto& raw : raw_terms) {
    std::string term = trim(raw);
    if (term.empty()) {
      fail(Errc::data_integrity, "phenotype: empty disease term");
    }
    ph.terms.insert(term);
  }
  if (ph.terms.empty()) {
    fail(Errc::data_integrity, "phenotype: at least one disease term required");
  }
  return ph;
}

Phenotype Phenotype::of(std::initializer_list<std::string> raw_terms) {
  return of(std::vector<std::string>(raw_terms));
}

void PatientInput::validate() const {
  if (subject_id.empty()) {
    fail(Errc::data_integrity, "patient input: empty subject_id");
  }
  if (phenotype.terms.empty()) {
    fail(Errc::data_integrity,
         "patient input '" + subject_id + "': empty phenotype");
  }
  std::set<std::string> seen;
  for (const auto& v : variants) {
    if (v.id.empty()) {
      fail(Errc::data_integrity,
           "patient input '" + subject_id + "': empty variant id");
    }
    if (!seen.insert(v.id).second) {
      fail(Errc::data_integrity, "patient input '" + subject_id +
                                     "': duplicate variant id '" + v.id + "'");
    }
  }
}

std::set<std::string> target_genes(const Phenotype& ph, const DatasetVersion& om) {
  require_dataset(om, kGeneMapDataset, "target_genes");
  std::set<std::string> targets;
  for (const auto& term : ph.terms) {
    auto it = om.records.find(term);
    if (it == om.records.end()) continue;
    if (const AttrValue* genes = find_attr(it->second, kGenesAttr)) {
      auto gene_set = attr_as_set(*genes);
      targets.insert(gene_set.begin(), gene_set.end());
    }
  }
  return targets;
}

std::vector<Variant> select_variants(const std::vector<Variant>& variants,
                                     const std::set<std::string>& targets) {
  std::vector<Variant> out;
  for (const auto& v : variants) {
    if (targets.contains(v.gene)) out.push_back(v);
  }
  return out;
}

Diagnosis classify(const std::vector<Variant>& selected, const DatasetVersion& cv) {
  require_dataset(cv, kClinVarDataset, "classify");
  Diagnosis diag;
  for (const auto& v : selected) {
    TrafficLight cls = TrafficLight::amber;
    auto it = cv.records.find(v.id);
    if (it != cv.records.end()) {
      const std::string& status = attr_string(it->second, kStatusAttr);
      if (status == kStatusPathogenic) {
        cls = TrafficLight::red;
      } else if (status == kStatusBenign) {
        cls = TrafficLight::green;
      } else if (status == kStatusUnknown) {
        cls = TrafficLight::amber;
      } else {
        fail(Errc::data_integrity,
             "record '" + v.id + "': invalid status '" + status + "'");
      }
    }
    diag.classified.emplace(v.id, cls);
  }
  return diag;
}

SviResult exec_svi(const PatientInput& x, const DatasetVersion& om,
                   const DatasetVersion& cv, std::int64_t clock,
                   const CostOptions& cost) {
  const auto start = std::chrono::steady_clock::now();

  const std::set<std::string> targets = target_genes(x.phenotype, om);
  const std::vector<Variant> selected = select_variants(x.variants, targets);

  SviResult result;
  result.diagnosis = classify(selected, cv);
  result.executed_at = clock;
  result.provenance[om.dataset_id] =
      ProvenanceQuery{om.dataset_id, kMatchKey, x.phenotype.terms};
  result.provenance[cv.dataset_id] =
      ProvenanceQuery{cv.dataset_id, kGeneAttr, targets};

  result.cost_ms = cost.base_ms;
  if (cost.measure_wall) {
    result.cost_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  start)
            .count();
  }
  return result;
}

DiagnosisDiff diff_diagnosis(const Diagnosis& y, const Diagnosis& y2) {
  DiagnosisDiff out;
  for (const auto& [id, cls] : y2.classified) {
    auto it = y.classified.find(id);
    if (it == y.classified.end()) {
      out.added.emplace_back(id, cls);
    } else if (it->second != cls) {
      out.reclassified.emplace_back(id, it->second, cls);
    }
  }
  for (const auto& [id, cls] : y.classified) {
    if (!y2.classified.contains(id)) out.removed.emplace_back(id, cls);
  }
  return out;
}

double impact_binary(const DiagnosisDiff& d) { return d.empty() ? 0.0 : 1.0; }

}  // namespace recomp
