#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrslab/generators.hpp"
#include "wrslab/pvariation.hpp"

namespace wrs {

/// Config validation failure; `field` carries the offending key path
/// (e.g. "generator.hurst").
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_, const std::string& message)
      : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}
};

enum class ExperimentKind { clt, rate, identity, pvar_scan, tightness, stable_cf };

const char* experiment_name(ExperimentKind kind);

/// Fully resolved run description. Flat key-value text with typed sections:
///
///   experiment = clt
///   m = 16384
///   replicas = 2000
///   master_seed = 7
///   output_dir = out
///   [generator]
///   kind = rademacher        # rademacher | qv
///   [weight]
///   kind = linear            # linear | polynomial | fbm
///
/// Unknown keys are rejected. A config file must state `replicas` and `m`
/// explicitly; everything else falls back to the experiment defaults.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::clt;
  GeneratorSpec generator = GeneratorSpec::rademacher();
  WeightSpec weight = WeightSpec::linear();
  long m = 0;
  std::vector<long> m_list;       // pvar-scan / tightness sweeps
  std::vector<long> n_list;       // rate
  long replicas = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> gammas;     // identity
  long quad_points = 512;         // identity
  long refinement = 8;            // identity, inner left-derivative panels
  double p = 3.0;                 // pvar-scan (or 1/beta when beta is given)
  std::vector<double> u_grid;     // stable-cf
  std::string output_dir = "out";
  unsigned threads = 0;           // 0 = hardware default
};

/// Defaults per experiment (the scales the acceptance thresholds are pinned
/// at). Used verbatim when no config file is given.
ExperimentConfig default_config(ExperimentKind kind);

/// Parses a config file on top of the defaults for `kind`. Throws
/// ConfigError with the field path on any unknown key, type error, missing
/// required key, or violated module precondition.
ExperimentConfig parse_config_file(const std::string& path, ExperimentKind kind);

/// Same, from an already-loaded text (used by tests).
ExperimentConfig parse_config_text(const std::string& text, ExperimentKind kind);

}  // namespace wrs
