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

#include "ghzguard/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <random>

namespace ghzguard {

namespace {

// Everything a shot needs, independent of the RNG.
struct Setup {
  int n_qubits = 0;
  Vector initial;
  std::vector<int> affected;
  MeasurementBasis basis;
  std::vector<int> targets;
  bool teleport = false;
  StateVector psi;  // teleportation input
  Label expected;   // dense coding: the message label
};

// Outcome table for one flip pattern.
struct OutcomeTable {
  std::vector<double> cumulative;
  std::vector<std::uint8_t> allowed;
  std::vector<std::uint8_t> success;
  std::vector<double> fidelity;
};

struct PartitionResult {
  std::vector<std::uint64_t> counts;
  std::uint64_t accepted = 0;
  std::uint64_t successes = 0;
  double fidelity_sum = 0.0;
  std::map<int, std::uint64_t> flips;
};

Operator power(const Operator& pauli, unsigned k) { return k ? pauli : gates::identity(1); }

Setup make_setup(const TrajectoryConfig& c) {
  const bool ghz = c.protocol == ProtocolId::kTeleportGhz || c.protocol == ProtocolId::kDenseGhz;
  const int parties = ghz ? 3 : 2;
  const StateVector resource = ghz_state(Label(std::vector<std::uint8_t>(parties, 0)));
  Vector psi_amps(2);
  psi_amps << c.alpha0, c.alpha1;
  StateVector psi(std::move(psi_amps));

  std::vector<int> targets(static_cast<std::size_t>(parties));
  for (int i = 0; i < parties; ++i) targets[static_cast<std::size_t>(i)] = i;

  if (c.protocol == ProtocolId::kTeleportEpr || c.protocol == ProtocolId::kTeleportGhz) {
    const StateVector initial = tensor(psi, resource);
    return Setup{initial.n_qubits(), initial.amplitudes(), targets, ghz_basis(parties),
                 targets,            true,                 psi,     Label{}};
  }
  const int alice[] = {0};
  StateVector encoded = apply(power(gates::pauli_z(), c.message.a1), alice, resource);
  encoded = apply(power(gates::pauli_x(), c.message.a2), alice, encoded);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(parties),
                                 static_cast<std::uint8_t>(c.message.a2));
  bits[0] = static_cast<std::uint8_t>(c.message.a1);
  return Setup{parties, encoded.amplitudes(), targets, ghz_basis(parties),
               targets, false,                psi,     Label(std::move(bits))};
}

OutcomeTable build_table(const Setup& s, std::uint64_t flip_mask) {
  std::vector<int> flipped;
  for (std::size_t i = 0; i < s.affected.size(); ++i) {
    if ((flip_mask >> i) & 1U) flipped.push_back(s.affected[i]);
  }
  Vector state = s.initial;
  for (int q : flipped) {
    const int site[] = {q};
    state = apply(gates::pauli_x(), site, state, s.n_qubits);
  }
  const auto kets = project_out(state, s.n_qubits, s.basis, s.targets);
  OutcomeTable t;
  double acc = 0.0;
  for (const auto& k : kets) {
    acc += k.probability;
    t.cumulative.push_back(acc);
    const bool ok = k.label.tail_uniform();
    t.allowed.push_back(ok);
    double fid = 0.0;
    bool success = false;
    if (s.teleport) {
      if (k.probability > 0.0) {
        const Operator u = power(gates::pauli_z(), k.label[0]) * power(gates::pauli_x(), k.label[1]);
        const Vector bob = u * k.remainder / std::sqrt(k.probability);
        fid = std::norm(s.psi.amplitudes().dot(bob));
      }
      success = ok && fid >= 1.0 - 1e-9;
    } else {
      success = k.label == s.expected;
      fid = success ? 1.0 : 0.0;
    }
    t.success.push_back(success);
    t.fidelity.push_back(fid);
  }
  if (std::abs(acc - 1.0) > tol_norm()) {
    throw InternalError("trajectory outcome probabilities sum to " + std::to_string(acc));
  }
  return t;
}

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

PartitionResult run_partition(const TrajectoryConfig& c, const Setup& s, std::uint64_t shots,
                              std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  const std::size_t n_aff = s.affected.size();
  const double p = c.noise.p;
  const double clean = 1.0 - static_cast<double>(n_aff) * p;
  std::map<std::uint64_t, OutcomeTable> tables;

  PartitionResult r;
  r.counts.assign(s.basis.size(), 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    std::uint64_t mask = 0;
    if (c.noise.mode == NoiseMode::kExact) {
      for (std::size_t i = 0; i < n_aff; ++i) {
        if (uniform(rng) < p) mask |= std::uint64_t{1} << i;
      }
    } else {
      const double u = uniform(rng);
      if (u >= clean) {
        auto k = static_cast<std::size_t>((u - clean) / p);
        mask = std::uint64_t{1} << std::min(k, n_aff - 1);
      }
    }
    auto it = tables.find(mask);
    if (it == tables.end()) it = tables.emplace(mask, build_table(s, mask)).first;
    const OutcomeTable& t = it->second;

    const double u = uniform(rng) * t.cumulative.back();
    auto pos = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), u);
    auto label = static_cast<std::size_t>(std::distance(t.cumulative.begin(), pos));
    label = std::min(label, t.cumulative.size() - 1);

    ++r.counts[label];
    ++r.flips[std::popcount(mask)];
    const bool counted = !c.postselect || t.allowed[label];
    if (t.allowed[label]) ++r.accepted;
    if (counted) {
      if (t.success[label]) ++r.successes;
      r.fidelity_sum += t.fidelity[label];
    }
  }
  return r;
}

}  // namespace

std::string to_string(ProtocolId id) {
  switch (id) {
    case ProtocolId::kTeleportEpr: return "teleport-epr";
    case ProtocolId::kTeleportGhz: return "teleport-ghz";
    case ProtocolId::kDenseEpr: return "dense-epr";
    case ProtocolId::kDenseGhz: return "dense-ghz";
  }
  return "unknown";
}

ProtocolId parse_protocol_id(std::string_view text) {
  for (auto id : {ProtocolId::kTeleportEpr, ProtocolId::kTeleportGhz, ProtocolId::kDenseEpr,
                  ProtocolId::kDenseGhz}) {
    if (text == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown protocol: " + std::string(text));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void TrajectoryConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (partitions < 1 || workers < 1) {
    throw std::invalid_argument("partitions and workers must be at least 1");
  }
  if (message.a1 > 1 || message.a2 > 1) throw std::invalid_argument("message bits must be 0/1");
  const bool ghz = protocol == ProtocolId::kTeleportGhz || protocol == ProtocolId::kDenseGhz;
  check_noise_domain(noise, ghz ? 3 : 2);
}

EmpiricalStats run_trajectories(const TrajectoryConfig& config) {
  config.validate();
  const Setup setup = make_setup(config);

  const std::uint64_t parts = config.partitions;
  std::vector<std::uint64_t> sizes(parts, config.shots / parts);
  for (std::uint64_t i = 0; i < config.shots % parts; ++i) ++sizes[i];

  std::vector<PartitionResult> results(parts);
  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t stream = splitmix64(config.seed + i * 0x9E3779B97F4A7C15ULL);
      results[i] = run_partition(config, setup, sizes[i], stream);
    }
  };
  const std::uint64_t workers = std::min<std::uint64_t>(config.workers, parts);
  if (workers <= 1) {
    run_range(0, parts);
  } else {
    std::vector<std::future<void>> jobs;
    const std::uint64_t chunk = (parts + workers - 1) / workers;
    for (std::uint64_t b = 0; b < parts; b += chunk) {
      jobs.push_back(std::async(std::launch::async, run_range, b, std::min(parts, b + chunk)));
    }
    for (auto& j : jobs) j.get();
  }

  EmpiricalStats stats;
  stats.rng_name = std::string(kRngName);
  stats.protocol = config.protocol;
  stats.shots = config.shots;
  stats.seed = config.seed;
  stats.partitions = config.partitions;
  std::vector<std::uint64_t> counts(setup.basis.size(), 0);
  double fidelity_sum = 0.0;
  for (const auto& r : results) {
    for (std::size_t l = 0; l < counts.size(); ++l) counts[l] += r.counts[l];
    stats.accepted += r.accepted;
    stats.successes += r.successes;
    fidelity_sum += r.fidelity_sum;
    for (const auto& [k, v] : r.flips) stats.flip_histogram[k] += v;
  }
  for (std::size_t l = 0; l < counts.size(); ++l) {
    stats.counts.emplace(setup.basis.elements()[l].label, counts[l]);
  }
  const auto shots = static_cast<double>(stats.shots);
  stats.acceptance_rate = static_cast<double>(stats.accepted) / shots;
  stats.acceptance_stderr =
      std::sqrt(stats.acceptance_rate * (1.0 - stats.acceptance_rate) / shots);
  const double denom = config.postselect ? static_cast<double>(stats.accepted) : shots;
  if (denom > 0.0) {
    stats.success_rate = static_cast<double>(stats.successes) / denom;
    stats.success_stderr = std::sqrt(stats.success_rate * (1.0 - stats.success_rate) / denom);
    stats.mean_fidelity = fidelity_sum / denom;
  }
  return stats;
}

ProtocolResult analytic_result(const TrajectoryConfig& config) {
  config.validate();
  switch (config.protocol) {
    case ProtocolId::kTeleportEpr:
      return teleport_epr({config.alpha0, config.alpha1, config.noise});
    case ProtocolId::kTeleportGhz:
      return teleport_ghz({config.alpha0, config.alpha1, config.noise}, config.postselect);
    case ProtocolId::kDenseEpr:
      return dense_epr(config.message, config.noise);
    case ProtocolId::kDenseGhz:
      return dense_ghz(config.message, config.noise, config.postselect);
  }
  throw std::invalid_argument("unknown protocol");
}

ComparisonReport compare_to_analytic(const EmpiricalStats& stats, const ProtocolResult& analytic,
                                     double z_threshold) {
  if (stats.counts.size() != analytic.outcome_distribution.size()) {
    throw std::invalid_argument("empirical and analytic label sets differ");
  }
  ComparisonReport report;
  report.z_threshold = z_threshold;
  const auto n = static_cast<double>(stats.shots);
  const double tol = tol_norm();
  for (const auto& [label, count] : stats.counts) {
    auto it = analytic.outcome_distribution.find(label);
    if (it == analytic.outcome_distribution.end()) {
      throw std::invalid_argument("label " + label.to_string() + " missing from analytic result");
    }
    const double p = std::clamp(it->second, 0.0, 1.0);
    LabelComparison row{label, count, static_cast<double>(count) / n, p, 0.0, false};
    const double mean = n * p;
    if (p <= tol || p >= 1.0 - tol) {
      const double target = p <= tol ? 0.0 : n;
      if (static_cast<double>(count) != target) {
        row.z = (static_cast<double>(count) > target ? 1.0 : -1.0) *
                std::numeric_limits<double>::infinity();
        row.flagged = true;
      }
    } else {
      row.z = (static_cast<double>(count) - mean) / std::sqrt(mean * (1.0 - p));
      row.flagged = std::abs(row.z) > z_threshold;
    }
    report.any_flagged = report.any_flagged || row.flagged;
    report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ghzguard
