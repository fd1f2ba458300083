#pragma once

#include <iosfwd>

#include "wrslab/config.hpp"

namespace wrs {

/// Acceptance thresholds, pinned at build time. The CLI summaries and the
/// acceptance suite both read from here.
namespace thresholds {
inline constexpr double kCltKsMax = 0.05;
inline constexpr double kIdentityRelErr = 1e-3;
inline constexpr double kIdentityAbsFloor = 1e-6;  // when lhs == 0
inline constexpr double kRateSlopeSlack = 0.1;     // slope <= -(alpha-1/2)+slack
inline constexpr double kTightRademacherLo = 2.5;
inline constexpr double kTightRademacherHi = 3.3;
inline constexpr double kTightQvRelSpread = 0.20;
inline constexpr double kStableCfSigmas = 3.0;
inline constexpr double kLepingleRatioMax = 10.0;
inline constexpr double kPvarKsMax = 0.1;
inline constexpr double kRecombinationRel = 1e-10;
}  // namespace thresholds

/// Exit codes shared by the runner and the CLI.
namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kAcceptanceFail = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kRuntimeError = 3;
}  // namespace exit_code

/// Runs the configured experiment, writing replicas.csv, aggregate.csv,
/// summary.txt and manifest.txt into cfg.output_dir. Returns an exit code;
/// on synthesis/runtime failure partially written artifacts are removed
/// before the error is rethrown to the caller.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Fast deterministic property suite (oracle cross-checks on small
/// instances). Prints one line per check; returns 0 iff all pass.
int selftest(std::ostream& log);

}  // namespace wrs
