#pragma once
// Error taxonomy shared across the engine. The CLI maps Errc::config to
// exit code 1 and everything else to 2.

#include <stdexcept>
#include <string>

namespace recomp {

enum class Errc {
  config,            // bad usage or configuration, unknown estimator/solver
  key_conflict,      // duplicate record keys in a commit
  version_conflict,  // non-monotonic commits, mismatched diff ranges
  patch_conflict,    // diff does not apply to the given version
  data_integrity,    // malformed records, dangling references, bad status values
  not_found,         // unknown dataset, subject, or execution
};

class RecompError : public std::runtime_error {
public:
  RecompError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw RecompError(code, what);
}

}  // namespace recomp
