#pragma once
// Intensional provenance: the query an execution ran against a reference
// dataset, recorded instead of the records it returned. Evaluating the same
// query against a diff set tells whether the change can touch the execution.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "recomp/record.hpp"

namespace recomp {

// match_field sentinel for matching on the record key itself.
inline constexpr const char* kMatchKey = "KEY";

struct ProvenanceQuery {
  std::string dataset_id;
  std::string match_field;  // kMatchKey or an attribute name
  std::set<std::string> terms;

  bool operator==(const ProvenanceQuery&) const = default;
};

// Records r where r.key is in terms (KEY matching) or r.attributes[field],
// viewed as a set, intersects terms. Records lacking the field never match.
// Results are sorted by key.
std::vector<Record> evaluate_query(const ProvenanceQuery& q,
                                   const std::vector<Record>& records);
std::vector<Record> evaluate_query(const ProvenanceQuery& q,
                                   const std::map<std::string, Record>& records);

bool query_matches(const ProvenanceQuery& q, const Record& r);

}  // namespace recomp
