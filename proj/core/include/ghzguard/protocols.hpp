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
#include "ghzguard/qcore.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace ghzguard {

// ---------------------------------------------------------------------------
// Results

struct ProtocolResult {
  /// Teleportation: Bob's qubit. Dense coding: the measured register after
  /// dephasing in the measurement basis. Generic tasks: the unmeasured qubits.
  /// Renormalized over retained labels when post-selecting.
  DensityMatrix output_state;
  double fidelity_to_target = 0.0;
  /// Every basis label, before post-selection.
  std::map<Label, double> outcome_distribution;
  /// Labels that can occur without noise (mu_1 = ... = mu_{N-1}).
  std::set<Label> allowed_labels;
  /// Probability of disallowed labels, i.e. of a detected flip.
  double detected_probability = 0.0;
  /// Summed probability of retained labels: 1 - detected when post-selecting,
  /// 1 otherwise.
  double acceptance_rate = 1.0;
  /// Weight of the intended result among allowed outcomes, divided by the
  /// acceptance rate when post-selecting.
  double desired_component_weight = 0.0;
  bool postselected = false;
};

// ---------------------------------------------------------------------------
// Teleportation and dense coding

struct TeleportInput {
  Complex alpha0{1.0, 0.0};
  Complex alpha1{0.0, 0.0};
  NoiseLevel noise;

  /// |Psi> = alpha0|0> + alpha1|1>; throws if not normalized.
  StateVector psi() const;
};

/// Qubits: Psi (0), EPR pair (1, 2) with Bob holding 2. Noise hits 0 and 1,
/// Alice measures (0, 1) in the Bell basis, Bob applies Z^m X^n.
ProtocolResult teleport_epr(const TeleportInput& input);

/// Qubits: Psi (0), GHZ (1, 2, 3) with Bob holding 3. Noise hits 0..2,
/// Alice measures (0, 1, 2) in the GHZ basis. Label (k, m, n) with m != n is
/// a detected flip. Bob corrects with Z^k X^m; with `postselect` the detected
/// runs are discarded.
ProtocolResult teleport_ghz(const TeleportInput& input, bool postselect);

struct Message {
  unsigned a1 = 0;
  unsigned a2 = 0;
};

/// Alice applies X^a2 Z^a1 to her half of |psi_00>; noise hits
/// `affected` (default both qubits); Bob measures in the Bell basis.
ProtocolResult dense_epr(Message message, NoiseLevel noise,
                         std::optional<std::vector<int>> affected = std::nullopt);

/// Shared |phi_000> with Alice holding qubit 0. Bob decodes label (k, m, n)
/// as (k, m); m != n flags a flip. Default `affected` is all three qubits.
ProtocolResult dense_ghz(Message message, NoiseLevel noise, bool postselect,
                         std::optional<std::vector<int>> affected = std::nullopt);

/// Coefficient a of |Psi><Psi| when `bob` (unnormalized) is written as
/// a |Psi><Psi| + b X|Psi><Psi|X, fitted on the two diagonal overlaps.
/// When X|Psi> is parallel to |Psi> the two terms coincide and the full
/// overlap is returned.
double desired_coefficient(const Matrix& bob, const StateVector& psi);

// ---------------------------------------------------------------------------
// Generic tasks and EPR -> GHZ lifting

/// A task that consumes one EPR pair through a Bell measurement followed by
/// a label-dependent unitary. Register layout: system qubits 0..s-1, then the
/// pair at (s, s+1) prepared in |psi_label>.
struct EprTask {
  std::optional<DensityMatrix> system_state;
  BellLabel epr_label;
  std::array<int, 2> measured_qubits{0, 1};
  /// U_mn on the unmeasured qubits (ascending order). All four labels.
  std::map<BellLabel, Operator> correction_unitaries;

  int system_qubits() const { return system_state ? system_state->n_qubits() : 0; }
  int n_qubits() const { return system_qubits() + 2; }
  int first_epr_qubit() const { return system_qubits(); }
  int second_epr_qubit() const { return system_qubits() + 1; }
  std::vector<int> unmeasured_qubits() const;
  DensityMatrix initial_state() const;
};

/// The GHZ version: N measured qubits with the retained labels (m, n, ..., n)
/// mapped to the original U_mn.
struct GhzTask {
  DensityMatrix initial_state;
  std::vector<int> measured_qubits;
  std::map<Label, Operator> correction_unitaries;
  std::set<Label> disallowed_labels;

  int n_qubits() const { return initial_state.n_qubits(); }
  int n_parties() const { return static_cast<int>(measured_qubits.size()); }
  std::vector<int> unmeasured_qubits() const;
  /// U for any label; disallowed labels reuse U_{mu_0 mu_1}.
  const Operator& correction_for(const Label& label) const;
};

/// Appends n_parties - 2 ancillas in |0>, each the target of a CNOT
/// controlled by the second EPR qubit, and measures (a, b, ancillas) in the
/// GHZ basis. The ancillas copy b in the computational basis, so b must be
/// the second EPR qubit, or the first one when epr_label.n = 0.
/// Throws std::invalid_argument on non-unitary corrections or a bad layout.
GhzTask lift_epr_task(const EprTask& task, int n_parties = 3);

/// Noisy execution of the original task (noise on the measured pair).
ProtocolResult run_epr_task(const EprTask& task, NoiseLevel noise);

/// Noisy execution of a lifted task (noise on the measured qubits).
/// desired_component_weight credits each noise branch whose retained output
/// equals the noiseless final state.
ProtocolResult run_lifted_with_noise(const GhzTask& task, NoiseLevel noise, bool postselect);

/// Psi at qubit 0, pair at (1, 2), Alice measures (0, 1), U_mn = Z^m X^n.
EprTask teleportation_task(const StateVector& psi);
/// Two-qubit classical register |00> at (0, 1), pair at (2, 3) prepared in
/// |psi_{a1 a2}>, Bob measures (2, 3) and writes the decoded bits into the
/// register with U_mn = X^m (x) X^n.
EprTask dense_coding_task(Message message);

// ---------------------------------------------------------------------------
// N-partite analysis

/// (1 - N p) / (1 - (N - 1) p). Requires N >= 2 and 0 <= N p < 1.
double nghz_efficiency_closed_form(int n_parties, double p);

struct NghzEfficiency {
  int n_parties = 0;
  double p = 0.0;
  double closed_form = 0.0;
  /// From the lifted teleportation task, first-order noise, post-selected.
  double simulated_success = 0.0;
  double simulated_acceptance = 0.0;
  /// False for N = 2: no label is disallowed, so nothing is post-selected.
  bool detection_possible = false;
  /// |closed_form - simulated_success|.
  double discrepancy = 0.0;
};

/// Closed form plus simulation. Throws InternalError when N >= 3 and the two
/// disagree beyond tol_norm(); for N = 2 the discrepancy is only reported.
NghzEfficiency nghz_efficiency(int n_parties, double p);

struct OptimalNReport {
  int best = 3;
  double p = 0.0;
  /// (N, closed-form efficiency) for N = 3..n_max.
  std::vector<std::pair<int, double>> efficiencies;
  /// 1 - 2p: the EPR result, no detection.
  double epr_baseline = 1.0;
  /// True when every efficiency ties (p = 0).
  bool degenerate = false;
};

/// Argmax of the efficiency over N in [3, n_max]; ties go to the smallest N.
/// Requires n_max >= 3 and 0 <= p < 1 / n_max.
OptimalNReport scan_optimal_n(double p, int n_max);
int optimal_n(double p, int n_max);

}  // namespace ghzguard
