#ifndef LCONE_CONFIG_HPP
#define LCONE_CONFIG_HPP

#include <string>
#include <vector>

#include "lcone/verify.hpp"

namespace lcone {

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct SweepConfig {
  std::string parameter;  // "tau", "U" or "lambda"; empty when no sweep block
  std::vector<double> values;
};

struct RunConfig {
  ExperimentConfig experiment;
  OutputConfig output;
  SweepConfig sweep;
};

/// Parses and validates a JSON run config. Unknown keys, wrong types, and
/// out-of-range values raise ConfigError with the offending path.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

}  // namespace lcone

#endif
