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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ghzguard {

/// Outcome label: a bit tuple (mu_0, ..., mu_{N-1}). Ordered lexicographically,
/// serialized as a bit string ("011").
class Label {
 public:
  Label() = default;
  explicit Label(std::vector<std::uint8_t> bits);

  static Label from_string(const std::string& bits);
  /// Bits of `index` with bit 0 of the label as the most significant.
  static Label from_index(int width, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::uint64_t index() const;
  std::string to_string() const;

  /// True when mu_1 = mu_2 = ... = mu_{N-1}, i.e. the label can occur in a
  /// noiseless GHZ-lifted protocol.
  bool tail_uniform() const;

  auto operator<=>(const Label&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

using GhzLabel = Label;

struct BellLabel {
  unsigned m = 0;
  unsigned n = 0;

  Label to_label() const { return Label({static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(n)}); }
  auto operator<=>(const BellLabel&) const = default;
};

/// |psi_mn> = (1/sqrt2) sum_j (-1)^{mj} |j, j xor n>.
StateVector bell_state(BellLabel label);

/// |phi_mu> = (1/sqrt2) sum_j (-1)^{j mu_0} |j, j xor mu_1, ..., j xor mu_{N-1}>.
/// Requires N >= 2.
StateVector ghz_state(const Label& mu);

struct BasisElement {
  Label label;
  StateVector ket;

  /// |ket><ket|, built on demand.
  Operator projector() const { return ket.amplitudes() * ket.amplitudes().adjoint(); }
};

/// Ordered labeled rank-one projectors. The constructor checks that the kets
/// are orthonormal and complete, which makes the projectors idempotent,
/// mutually orthogonal and summing to identity.
class MeasurementBasis {
 public:
  MeasurementBasis(int n_qubits, std::vector<BasisElement> elements);

  int n_qubits() const { return n_qubits_; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

 private:
  int n_qubits_;
  std::vector<BasisElement> elements_;
};

MeasurementBasis bell_basis();
/// 2^N GHZ projectors in lexicographic label order. ghz_basis(2) is the Bell
/// basis with (m, n) <-> (mu_0, mu_1).
MeasurementBasis ghz_basis(int n_parties);

struct MeasurementRecord {
  Label label;
  double probability = 0.0;
  /// Renormalized full-register state; empty when probability <= tol_norm().
  std::optional<DensityMatrix> post_state;
};

std::vector<MeasurementRecord> measure(const DensityMatrix& rho,
                                       const MeasurementBasis& basis,
                                       std::span<const int> targets);

/// Unnormalized state of the unmeasured qubits after projecting `targets`
/// onto one basis element: (<phi| x 1) rho (|phi> x 1). Its trace is the
/// outcome probability.
struct ConditionalBlock {
  Label label;
  double probability = 0.0;
  Matrix remainder;
};

/// Works on raw (possibly unnormalized) matrices. Remaining qubits keep
/// ascending order; with no remaining qubits the remainder is 1x1.
std::vector<ConditionalBlock> project_out(const Matrix& rho, int n_qubits,
                                          const MeasurementBasis& basis,
                                          std::span<const int> targets);

/// Pure-state version: unnormalized ket of the remaining qubits.
struct ConditionalKet {
  Label label;
  double probability = 0.0;
  Vector remainder;
};

std::vector<ConditionalKet> project_out(const Vector& psi, int n_qubits,
                                        const MeasurementBasis& basis,
                                        std::span<const int> targets);

/// Qubits of an n-qubit register not in `targets`, ascending.
std::vector<int> complement(std::span<const int> targets, int n_qubits);

}  // namespace ghzguard
