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

#include "ghzguard/qcore.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghzguard {

/// Exact: independent flips on every affected qubit (all 2^N subsets).
/// FirstOrder: keep at most one flip, weights (1 - Np, p, ..., p).
enum class NoiseMode { kExact, kFirstOrder };

std::string to_string(NoiseMode mode);
/// Accepts "exact", "first-order" and "first_order".
NoiseMode parse_noise_mode(std::string_view text);

/// Raised when a noise strength falls outside the modelled regime.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Flip probability and mode, without the qubit set. Protocols decide which
/// qubits are exposed.
struct NoiseLevel {
  double p = 0.0;
  NoiseMode mode = NoiseMode::kFirstOrder;
};

struct NoiseSpec {
  double p = 0.0;
  std::vector<int> affected_qubits;
  NoiseMode mode = NoiseMode::kFirstOrder;

  NoiseSpec() = default;
  NoiseSpec(double p_, std::vector<int> affected, NoiseMode mode_)
      : p(p_), affected_qubits(std::move(affected)), mode(mode_) {}
  NoiseSpec(NoiseLevel level, std::vector<int> affected)
      : p(level.p), affected_qubits(std::move(affected)), mode(level.mode) {}

  /// Throws DomainError unless 0 <= p < 0.5 and, in first-order mode,
  /// N p < 1; throws std::invalid_argument on bad qubit indices.
  void validate(int n_qubits) const;
};

/// Throws DomainError if `level` cannot be applied to `n_affected` qubits.
void check_noise_domain(const NoiseLevel& level, std::size_t n_affected);

/// rho -> sum_j K_j rho K_j^dagger with sum_j K_j^dagger K_j = 1.
class KrausChannel {
 public:
  KrausChannel(int n_qubits, std::vector<Operator> kraus_ops, NoiseMode mode);

  int n_qubits() const { return n_qubits_; }
  NoiseMode mode() const { return mode_; }
  const std::vector<Operator>& kraus_ops() const { return kraus_ops_; }

  /// Largest entry of |sum K^dagger K - 1|.
  double completeness_error() const;

  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  int n_qubits_;
  std::vector<Operator> kraus_ops_;
  NoiseMode mode_;
};

/// Explicit Kraus list for bit-flip noise (mode taken from the spec).
KrausChannel bitflip_channel(int n_qubits, const NoiseSpec& spec);
/// Same structure with sigma_z.
KrausChannel phaseflip_channel(int n_qubits, const NoiseSpec& spec);

DensityMatrix bitflip_exact(const DensityMatrix& rho, const NoiseSpec& spec);
DensityMatrix bitflip_first_order(const DensityMatrix& rho, const NoiseSpec& spec);
DensityMatrix phaseflip_exact(const DensityMatrix& rho, const NoiseSpec& spec);

/// Bit-flip noise on a raw n-qubit matrix; dispatches on spec.mode.
Matrix apply_bitflip(const Matrix& rho, int n_qubits, const NoiseSpec& spec);

/// One incoherent term of a bit-flip channel: weight times X on `flipped`.
struct NoiseBranch {
  double weight = 0.0;
  std::vector<int> flipped;
};

/// Exact mode: every subset S with p^|S| (1-p)^(N-|S|). First-order mode:
/// the no-flip branch with 1 - Np, then one branch per qubit with p.
/// Branch weights sum to 1 in both modes.
std::vector<NoiseBranch> bitflip_branches(const NoiseSpec& spec);

}  // namespace ghzguard
