#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ddsim/config.hpp"

namespace ddsim {

/// Tool version embedded in every result file.
const char* tool_version();

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<OutputFormat> format;
  std::optional<std::string> out;
};

/// Applies command-line overrides. A seed override is folded into the digest;
/// workers, format and path are not, since they do not change the results.
void apply_overrides(RunConfig& config, const RunOverrides& overrides);

/// Runs one experiment and returns the complete result file text.
std::string run_experiment(ExperimentKind kind, const RunConfig& config);

}  // namespace ddsim
