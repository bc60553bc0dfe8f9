#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harper/serialize.hpp"

namespace harper {

inline constexpr const char* kVersionTag = "harper 0.1.0";

// Parsed experiment configuration. Schema-validated: unknown keys are
// rejected, the seed is mandatory.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  Json group;       // group section (verbatim, validated)
  Json multiplier;  // multiplier section
  Json op;          // operator section
  Json spectra;
  Json identify;
  Json lamp_dims;
  Json lift;
  std::string out_dir = "out";

  GroupModel make_group() const;
  Multiplier make_multiplier() const;
  AlgebraElement make_operator() const;  // group+multiplier+operator sections

  // spectra defaults
  std::vector<int> levels() const;
  int kappa() const;
  std::vector<double> grid() const;
  int qmax() const;
  double epsilon() const;
  std::int64_t cap_dim() const;
  int moment_k() const;
  int jobs() const;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig parse(const Json& j);
  Json canonical() const;  // sorted-key dump used for cache keys
};

std::uint64_t fnv1a64(const std::string& s);

}  // namespace harper
