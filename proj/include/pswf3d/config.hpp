#pragma once

// Run configuration shared by the command-line verbs. Values come from an
// optional JSON file and are overridden by command-line flags.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pswf3d/borndata.hpp"

namespace pswf3d {

struct RunConfig {
  /// Exactly one of k and c; c = 2k.
  std::optional<double> k;
  std::optional<double> c;
  int K = 150;
  int T = 23;
  int m_theta = 31;
  int m_phi = 61;
  /// Explicit cutoff on |alpha|; the default policy applies when unset.
  std::optional<double> sigma;
  double eta = 1e-4;
  double s = 0.5;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::array<int, 3> resolution{64, 64, 64};
  Box extent{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  std::filesystem::path basis_cache;

  /// Throws ValidationError unless exactly one of k, c is positive and all
  /// counts are at least one.
  void validate() const;
  double bandwidth() const;
  double wave_number() const { return bandwidth() / 2.0; }
};

/// Reads a JSON object whose keys match the RunConfig fields; unknown keys
/// are rejected.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace pswf3d
