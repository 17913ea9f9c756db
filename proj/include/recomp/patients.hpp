#pragma once
// Versioned patient inputs keyed by subject, with JSONL persistence. The
// registry retains every version so past executions can be replayed.

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "recomp/svi.hpp"

namespace recomp {

class PatientRegistry {
public:
  void attach_log(const std::filesystem::path& file);

  // input_version must exceed the subject's current version (0 is fine for a
  // new subject).
  void register_input(const PatientInput& input);

  std::optional<PatientInput> get(const std::string& subject_id,
                                  std::uint64_t input_version) const;
  std::optional<PatientInput> latest(const std::string& subject_id) const;
  bool has(const std::string& subject_id) const;
  std::vector<std::string> subjects() const;

private:
  std::map<std::string, std::vector<PatientInput>> by_subject_;
  std::optional<std::filesystem::path> log_file_;
  mutable std::mutex mu_;
};

}  // namespace recomp
