#pragma once
// Keyed records whose attribute values are either a string or a set of
// strings. The unit of storage and diffing across dataset versions.

#include <map>
#include <set>
#include <string>
#include <variant>

namespace recomp {

using AttrValue = std::variant<std::string, std::set<std::string>>;

struct Record {
  std::string key;
  std::map<std::string, AttrValue> attributes;

  bool operator==(const Record&) const = default;
};

// An attribute viewed as a set: a plain string acts as a singleton.
std::set<std::string> attr_as_set(const AttrValue& value);

// nullptr when the attribute is absent.
const AttrValue* find_attr(const Record& r, const std::string& name);

// Fetch a string-valued attribute; data_integrity error (naming the record
// key) when absent or not a plain string.
const std::string& attr_string(const Record& r, const std::string& name);

}  // namespace recomp
