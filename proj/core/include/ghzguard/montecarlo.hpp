// Copyright 2026 The ghzguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ghzguard/bases.hpp"
#include "ghzguard/noise.hpp"
#include "ghzguard/protocols.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ghzguard {

enum class ProtocolId { kTeleportEpr, kTeleportGhz, kDenseEpr, kDenseGhz };

std::string to_string(ProtocolId id);
/// "teleport-epr", "teleport-ghz", "dense-epr", "dense-ghz".
ProtocolId parse_protocol_id(std::string_view text);

/// Name of the generator behind every trajectory stream. Substream i of a run
/// is seeded with splitmix64(seed + i * 0x9E3779B97F4A7C15); uniforms take
/// the top 53 bits of each 64-bit draw.
inline constexpr std::string_view kRngName = "mt19937_64/splitmix64-substreams";

/// SplitMix64 finalizer, exposed so other implementations can reproduce
/// substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct TrajectoryConfig {
  ProtocolId protocol = ProtocolId::kDenseGhz;
  NoiseLevel noise;
  bool postselect = false;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  Message message;
  Complex alpha0{1.0, 0.0};
  Complex alpha1{0.0, 0.0};
  /// Number of RNG substreams the shots are split across. Counts depend on
  /// this plan, not on how many threads run it.
  unsigned partitions = 1;
  unsigned workers = 1;

  void validate() const;
};

struct EmpiricalStats {
  std::string rng_name;
  ProtocolId protocol = ProtocolId::kDenseGhz;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  unsigned partitions = 1;
  /// Every basis label, zero-filled; sums to shots.
  std::map<Label, std::uint64_t> counts;
  /// Shots whose label is allowed (no detected flip).
  std::uint64_t accepted = 0;
  /// Successful shots: allowed label and intended result (Bob holds |Psi>, or
  /// the decoded label equals the message).
  std::uint64_t successes = 0;
  double acceptance_rate = 0.0;
  double acceptance_stderr = 0.0;
  /// successes / accepted when post-selecting, successes / shots otherwise.
  double success_rate = 0.0;
  double success_stderr = 0.0;
  /// Teleportation only: mean |<Psi|Bob>|^2 over the same denominator.
  double mean_fidelity = 0.0;
  /// Shots by number of qubits flipped.
  std::map<int, std::uint64_t> flip_histogram;
};

EmpiricalStats run_trajectories(const TrajectoryConfig& config);

/// Density-matrix result for the same protocol and parameters.
ProtocolResult analytic_result(const TrajectoryConfig& config);

struct LabelComparison {
  Label label;
  std::uint64_t count = 0;
  double observed = 0.0;
  double expected = 0.0;
  /// (count - shots p) / sqrt(shots p (1 - p)); infinite when p is 0 or 1 and
  /// the count disagrees.
  double z = 0.0;
  bool flagged = false;
};

struct ComparisonReport {
  std::vector<LabelComparison> rows;
  double z_threshold = 4.0;
  bool any_flagged = false;
  double max_abs_z = 0.0;
};

/// Per-label z-scores of the empirical counts against the analytic outcome
/// distribution. Throws std::invalid_argument if the label sets differ.
ComparisonReport compare_to_analytic(const EmpiricalStats& stats, const ProtocolResult& analytic,
                                     double z_threshold = 4.0);

}  // namespace ghzguard
