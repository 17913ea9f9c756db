#pragma once
// Simple Variant Interpretation: phenotype -> target genes -> variant
// selection -> traffic-light classification, against GeneMap and ClinVar
// dataset versions. Pure over immutable inputs; emits observed cost and the
// provenance queries it issued.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "recomp/datastore.hpp"
#include "recomp/provenance.hpp"

namespace recomp {

// Reference dataset ids and attribute names the pipeline consults.
inline constexpr const char* kGeneMapDataset = "genemap";
inline constexpr const char* kClinVarDataset = "clinvar";
inline constexpr const char* kGenesAttr = "genes";    // GeneMap: set of gene symbols
inline constexpr const char* kGeneAttr = "gene";      // ClinVar: gene the variant sits on
inline constexpr const char* kStatusAttr = "status";  // ClinVar: unknown|benign|pathogenic

inline constexpr const char* kStatusUnknown = "unknown";
inline constexpr const char* kStatusBenign = "benign";
inline constexpr const char* kStatusPathogenic = "pathogenic";

enum class TrafficLight { red, amber, green };

std::string to_string(TrafficLight c);
TrafficLight traffic_light_from_string(const std::string& s);

struct Phenotype {
  std::set<std::string> terms;

  // Trims surrounding whitespace; rejects empty terms and an empty set.
  static Phenotype of(std::vector<std::string> raw_terms);
  static Phenotype of(std::initializer_list<std::string> raw_terms);

  bool operator==(const Phenotype&) const = default;
};

struct Variant {
  std::string id;
  std::string gene;

  auto operator<=>(const Variant&) const = default;
};

struct PatientInput {
  std::string subject_id;
  std::uint64_t input_version = 0;
  std::vector<Variant> variants;  // unique ids; validated by validate()
  Phenotype phenotype;

  void validate() const;

  bool operator==(const PatientInput&) const = default;
};

struct Diagnosis {
  std::map<std::string, TrafficLight> classified;  // variant_id -> class

  bool operator==(const Diagnosis&) const = default;
};

struct DiagnosisDiff {
  std::vector<std::pair<std::string, TrafficLight>> added;
  std::vector<std::pair<std::string, TrafficLight>> removed;
  std::vector<std::tuple<std::string, TrafficLight, TrafficLight>> reclassified;

  bool empty() const {
    return added.empty() && removed.empty() && reclassified.empty();
  }
};

// Union of genes(dt) over the phenotype's terms; terms absent from the
// GeneMap version contribute nothing.
std::set<std::string> target_genes(const Phenotype& ph, const DatasetVersion& om);

// Variants located on a target gene.
std::vector<Variant> select_variants(const std::vector<Variant>& variants,
                                     const std::set<std::string>& targets);

// pathogenic -> red, benign -> green, unknown or uncatalogued -> amber.
// Malformed status values are data_integrity errors naming the record key.
Diagnosis classify(const std::vector<Variant>& selected, const DatasetVersion& cv);

struct CostOptions {
  bool measure_wall = true;  // include measured wall-clock milliseconds
  double base_ms = 0.0;      // synthetic constant added on top
};

struct SviResult {
  Diagnosis diagnosis;
  double cost_ms = 0.0;
  std::int64_t executed_at = 0;
  std::map<std::string, ProvenanceQuery> provenance;  // dataset_id -> query
};

// One execution of the pipeline. Provenance holds Q_OM (phenotype terms
// matched on GeneMap keys) and Q_CV (computed target genes matched on the
// ClinVar gene attribute).
SviResult exec_svi(const PatientInput& x, const DatasetVersion& om,
                   const DatasetVersion& cv, std::int64_t clock,
                   const CostOptions& cost = {});

DiagnosisDiff diff_diagnosis(const Diagnosis& y, const Diagnosis& y2);

// 0 when the diff is empty in all three sets, else 1.
double impact_binary(const DiagnosisDiff& d);

}  // namespace recomp
