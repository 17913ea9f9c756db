#include "recomp/record.hpp"

#include "recomp/error.hpp"

namespace recomp {

std::set<std::string> attr_as_set(const AttrValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) {
    return {*s};
  }
  return std::get<std::set<std::string>>(value);
}

const AttrValue* find_attr(const Record& r, const std::string& name) {
  auto it = r.attributes.find(name);
  return it == r.attributes.end() ? nullptr : &it->second;
}

const std::string& attr_string(const Record& r, const std::string& name) {
  const AttrValue* value = find_attr(r, name);
  if (value == nullptr) {
    fail(Errc::data_integrity,
         "record '" + r.key + "': missing attribute '" + name + "'");
  }
  const auto* s = std::get_if<std::string>(value);
  if (s == nullptr) {
    fail(Errc::data_integrity,
         "record '" + r.key + "': attribute '" + name + "' is not a string");
  }
  return *s;
}

}  // namespace recomp
