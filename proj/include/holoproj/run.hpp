#pragma once

#include <string>
#include <vector>

#include "holoproj/config.hpp"
#include "holoproj/verify.hpp"

namespace holoproj {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCheckFailure = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  std::string document;  // serialized artifact in the configured format
  std::vector<VerificationReport> reports;
};

/// Executes the configured command without writing anything.
/// Throws InputError (and module errors) on invalid input.
RunOutcome execute(const RunConfig& cfg);

/// Output path: explicit config value, else `<dir>/<command>.<format>` when
/// `default_dir` is non-empty, else stdout ("").
std::string resolve_output_path(const RunConfig& cfg, const std::string& default_dir);

/// execute + write; input errors map to exit 1 with the diagnostic on `err`.
int run(const RunConfig& cfg, std::ostream& err);

}  // namespace holoproj
