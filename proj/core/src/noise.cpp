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

#include "ghzguard/noise.hpp"

#include <cmath>

namespace ghzguard {

namespace {

void require_mode(const NoiseSpec& spec, NoiseMode mode, const char* who) {
  if (spec.mode != mode) {
    throw std::invalid_argument(std::string(who) + ": noise spec has mode " +
                                to_string(spec.mode));
  }
}

// Single-site Pauli P on `qubit` of an n-qubit register.
Operator site_operator(const Operator& pauli, int qubit, int n_qubits) {
  const int target[] = {qubit};
  return embed(pauli, target, n_qubits);
}

KrausChannel pauli_channel(int n_qubits, const NoiseSpec& spec, const Operator& pauli) {
  spec.validate(n_qubits);
  const auto& qs = spec.affected_qubits;
  const std::size_t n = qs.size();
  std::vector<Operator> ops;
  if (spec.mode == NoiseMode::kFirstOrder) {
    ops.push_back(std::sqrt(1.0 - static_cast<double>(n) * spec.p) * gates::identity(n_qubits));
    for (int q : qs) ops.push_back(std::sqrt(spec.p) * site_operator(pauli, q, n_qubits));
  } else {
    // Product of per-qubit {sqrt(1-p) 1, sqrt(p) P}: one operator per subset.
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
      Operator k = gates::identity(n_qubits);
      double weight = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if ((subset >> i) & 1U) {
          k = site_operator(pauli, qs[i], n_qubits) * k;
          weight *= spec.p;
        } else {
          weight *= 1.0 - spec.p;
        }
      }
      ops.push_back(std::sqrt(weight) * k);
    }
  }
  return KrausChannel(n_qubits, std::move(ops), spec.mode);
}

}  // namespace

std::string to_string(NoiseMode mode) {
  return mode == NoiseMode::kExact ? "exact" : "first-order";
}

NoiseMode parse_noise_mode(std::string_view text) {
  if (text == "exact") return NoiseMode::kExact;
  if (text == "first-order" || text == "first_order") return NoiseMode::kFirstOrder;
  throw std::invalid_argument("unknown noise mode: " + std::string(text));
}

void check_noise_domain(const NoiseLevel& level, std::size_t n_affected) {
  if (!(level.p >= 0.0)) {
    throw DomainError("flip probability must be non-negative, got " + std::to_string(level.p));
  }
  if (level.mode == NoiseMode::kFirstOrder &&
      static_cast<double>(n_affected) * level.p >= 1.0) {
    throw DomainError("first-order noise needs N*p < 1 (N = " + std::to_string(n_affected) +
                      ", p = " + std::to_string(level.p) + ")");
  }
  if (!(level.p < 0.5)) {
    throw DomainError("flip probability must lie in [0, 0.5), got " + std::to_string(level.p));
  }
}

void NoiseSpec::validate(int n_qubits) const {
  check_qubit_indices(affected_qubits, n_qubits);
  check_noise_domain({p, mode}, affected_qubits.size());
}

// ---------------------------------------------------------------------------

KrausChannel::KrausChannel(int n_qubits, std::vector<Operator> kraus_ops, NoiseMode mode)
    : n_qubits_(n_qubits), kraus_ops_(std::move(kraus_ops)), mode_(mode) {
  if (kraus_ops_.empty()) throw std::invalid_argument("Kraus channel needs operators");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  for (const auto& k : kraus_ops_) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("Kraus operator has the wrong shape");
    }
  }
  if (completeness_error() > tol_norm()) {
    throw std::invalid_argument("Kraus operators are not complete");
  }
}

double KrausChannel::completeness_error() const {
  const Eigen::Index dim = kraus_ops_.front().rows();
  Operator sum = Operator::Zero(dim, dim);
  for (const auto& k : kraus_ops_) sum += k.adjoint() * k;
  return (sum - Operator::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

Matrix KrausChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_ops_) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  if (rho.n_qubits() != n_qubits_) throw std::invalid_argument("channel width mismatch");
  return DensityMatrix(apply(rho.entries()));
}

KrausChannel bitflip_channel(int n_qubits, const NoiseSpec& spec) {
  return pauli_channel(n_qubits, spec, gates::pauli_x());
}

KrausChannel phaseflip_channel(int n_qubits, const NoiseSpec& spec) {
  return pauli_channel(n_qubits, spec, gates::pauli_z());
}

// ---------------------------------------------------------------------------

Matrix apply_bitflip(const Matrix& rho, int n_qubits, const NoiseSpec& spec) {
  spec.validate(n_qubits);
  const double p = spec.p;
  if (spec.mode == NoiseMode::kExact) {
    // Single-site channels on distinct qubits commute; their product is the
    // full subset sum.
    Matrix out = rho;
    for (int q : spec.affected_qubits) {
      const int site[] = {q};
      out = (1.0 - p) * out + p * flip_bits(out, n_qubits, site);
    }
    return out;
  }
  const double n = static_cast<double>(spec.affected_qubits.size());
  Matrix out = (1.0 - n * p) * rho;
  for (int q : spec.affected_qubits) {
    const int site[] = {q};
    out += p * flip_bits(rho, n_qubits, site);
  }
  return out;
}

DensityMatrix bitflip_exact(const DensityMatrix& rho, const NoiseSpec& spec) {
  require_mode(spec, NoiseMode::kExact, "bitflip_exact");
  return DensityMatrix(apply_bitflip(rho.entries(), rho.n_qubits(), spec));
}

DensityMatrix bitflip_first_order(const DensityMatrix& rho, const NoiseSpec& spec) {
  require_mode(spec, NoiseMode::kFirstOrder, "bitflip_first_order");
  return DensityMatrix(apply_bitflip(rho.entries(), rho.n_qubits(), spec));
}

DensityMatrix phaseflip_exact(const DensityMatrix& rho, const NoiseSpec& spec) {
  require_mode(spec, NoiseMode::kExact, "phaseflip_exact");
  spec.validate(rho.n_qubits());
  Matrix out = rho.entries();
  for (int q : spec.affected_qubits) {
    const int site[] = {q};
    out = (1.0 - spec.p) * out + spec.p * phase_flip_bits(out, rho.n_qubits(), site);
  }
  return DensityMatrix(std::move(out));
}

std::vector<NoiseBranch> bitflip_branches(const NoiseSpec& spec) {
  check_noise_domain({spec.p, spec.mode}, spec.affected_qubits.size());
  const auto& qs = spec.affected_qubits;
  const std::size_t n = qs.size();
  std::vector<NoiseBranch> branches;
  if (spec.mode == NoiseMode::kFirstOrder) {
    branches.push_back({1.0 - static_cast<double>(n) * spec.p, {}});
    for (int q : qs) branches.push_back({spec.p, {q}});
    return branches;
  }
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
    NoiseBranch b{1.0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      if ((subset >> i) & 1U) {
        b.weight *= spec.p;
        b.flipped.push_back(qs[i]);
      } else {
        b.weight *= 1.0 - spec.p;
      }
    }
    branches.push_back(std::move(b));
  }
  return branches;
}

}  // namespace ghzguard
