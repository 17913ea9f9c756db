#include "recomp/provenance.hpp"

#include <algorithm>

namespace recomp {

bool query_matches(const ProvenanceQuery& q, const Record& r) {
  if (q.match_field == kMatchKey) {
    return q.terms.contains(r.key);
  }
  const AttrValue* value = find_attr(r, q.match_field);
  if (value == nullptr) return false;
  for (const auto& element : attr_as_set(*value)) {
    if (q.terms.contains(element)) return true;
  }
  return false;
}

std::vector<Record> evaluate_query(const ProvenanceQuery& q,
                                   const std::vector<Record>& records) {
  std::vector<Record> out;
  for (const auto& r : records) {
    if (query_matches(q, r)) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const Record& x, const Record& y) { return x.key < y.key; });
  return out;
}

std::vector<Record> evaluate_query(const ProvenanceQuery& q,
                                   const std::map<std::string, Record>& records) {
  std::vector<Record> out;
  for (const auto& [key, r] : records) {
    if (query_matches(q, r)) out.push_back(r);
  }
  return out;
}

}  // namespace recomp
