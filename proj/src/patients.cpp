#include "recomp/patients.hpp"

#include "recomp/error.hpp"
#include "recomp/json_io.hpp"

namespace recomp {

void PatientRegistry::attach_log(const std::filesystem::path& file) {
  std::lock_guard lock(mu_);
  if (!by_subject_.empty()) {
    fail(Errc::config, "patient registry: attach_log must precede registrations");
  }
  log_file_ = file;
  if (!std::filesystem::exists(file)) return;
  for (const auto& line : io::read_jsonl(file)) {
    PatientInput input = io::patient_from_json(line);
    auto& versions = by_subject_[input.subject_id];
    if (!versions.empty() && input.input_version <= versions.back().input_version) {
      fail(Errc::data_integrity, "patient log: non-monotonic input_version for '" +
                                     input.subject_id + "'");
    }
    versions.push_back(std::move(input));
  }
}

void PatientRegistry::register_input(const PatientInput& input) {
  input.validate();
  std::lock_guard lock(mu_);
  auto& versions = by_subject_[input.subject_id];
  if (!versions.empty() && input.input_version <= versions.back().input_version) {
    fail(Errc::version_conflict,
         "patient '" + input.subject_id + "': input_version " +
             std::to_string(input.input_version) + " does not exceed current " +
             std::to_string(versions.back().input_version));
  }
  versions.push_back(input);
  if (log_file_) {
    io::append_jsonl(*log_file_, io::to_json(input));
  }
}

std::optional<PatientInput> PatientRegistry::get(const std::string& subject_id,
                                                 std::uint64_t input_version) const {
  std::lock_guard lock(mu_);
  auto it = by_subject_.find(subject_id);
  if (it == by_subject_.end()) return std::nullopt;
  for (const auto& input : it->second) {
    if (input.input_version == input_version) return input;
  }
  return std::nullopt;
}

std::optional<PatientInput> PatientRegistry::latest(const std::string& subject_id) const {
  std::lock_guard lock(mu_);
  auto it = by_subject_.find(subject_id);
  if (it == by_subject_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

bool PatientRegistry::has(const std::string& subject_id) const {
  std::lock_guard lock(mu_);
  return by_subject_.contains(subject_id);
}

std::vector<std::string> PatientRegistry::subjects() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  out.reserve(by_subject_.size());
  for (const auto& [subject, versions] : by_subject_) out.push_back(subject);
  return out;
}

}  // namespace recomp
