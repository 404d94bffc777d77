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

#include "ghzguard/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ghzguard {

namespace {

// Sum of corrected conditional states, split by whether the label is allowed.
struct PipelineOutput {
  Matrix all;
  Matrix allowed;
  std::map<Label, double> distribution;
  double allowed_mass = 0.0;
  double disallowed_mass = 0.0;
};

template <class CorrectionFn, class AllowedFn>
PipelineOutput run_pipeline(const Matrix& rho, int n_qubits, const MeasurementBasis& basis,
                            std::span<const int> targets, CorrectionFn correction,
                            AllowedFn allowed) {
  auto blocks = project_out(rho, n_qubits, basis, targets);
  const Eigen::Index rdim = blocks.front().remainder.rows();
  PipelineOutput out{Matrix::Zero(rdim, rdim), Matrix::Zero(rdim, rdim), {}, 0.0};
  for (auto& block : blocks) {
    if (block.probability < -tol_eig()) {
      throw InternalError("negative probability for label " + block.label.to_string());
    }
    const Operator& u = correction(block.label);
    const Matrix corrected = u * block.remainder * u.adjoint();
    out.all += corrected;
    if (allowed(block.label)) {
      out.allowed += corrected;
      out.allowed_mass += block.probability;
    } else {
      out.disallowed_mass += block.probability;
    }
    out.distribution.emplace(block.label, block.probability);
  }
  return out;
}

std::set<Label> allowed_label_set(const MeasurementBasis& basis) {
  std::set<Label> out;
  for (const auto& e : basis.elements()) {
    if (e.label.tail_uniform()) out.insert(e.label);
  }
  return out;
}

Operator pauli_power(const Operator& pauli, unsigned k) {
  return k ? pauli : gates::identity(1);
}

// Z^k X^m: the correction for teleportation label (k, m, ...).
Operator teleport_correction(unsigned k, unsigned m) {
  return pauli_power(gates::pauli_z(), k) * pauli_power(gates::pauli_x(), m);
}

std::vector<int> range_of(int begin, int end) {
  std::vector<int> v(static_cast<std::size_t>(end - begin));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

// Teleportation over an n_shared-party GHZ resource; n_shared = 2 is EPR.
ProtocolResult teleport_impl(const TeleportInput& input, int n_shared, bool postselect) {
  const StateVector psi = input.psi();
  const int n = 1 + n_shared;
  const StateVector resource = ghz_state(Label(std::vector<std::uint8_t>(n_shared, 0)));
  const StateVector initial = tensor(psi, resource);

  const std::vector<int> alice = range_of(0, n_shared);
  const NoiseSpec spec(input.noise, alice);
  const Matrix rho = apply_bitflip(DensityMatrix::from_pure(initial).entries(), n, spec);

  const MeasurementBasis basis = ghz_basis(n_shared);
  std::map<Label, Operator> corrections;
  for (const auto& e : basis.elements()) {
    corrections.emplace(e.label, teleport_correction(e.label[0], e.label[1]));
  }
  auto out = run_pipeline(
      rho, n, basis, alice, [&](const Label& l) -> const Operator& { return corrections.at(l); },
      [](const Label& l) { return l.tail_uniform(); });

  if (postselect && !(out.allowed_mass > tol_norm())) {
    throw InternalError("post-selection retained no probability");
  }
  const double acceptance = postselect ? out.allowed_mass : 1.0;
  DensityMatrix output = DensityMatrix::normalized(postselect ? out.allowed : out.all);
  const double fid = fidelity(output, psi);
  return ProtocolResult{
      .output_state = std::move(output),
      .fidelity_to_target = fid,
      .outcome_distribution = std::move(out.distribution),
      .allowed_labels = allowed_label_set(basis),
      .detected_probability = out.disallowed_mass,
      .acceptance_rate = acceptance,
      .desired_component_weight = desired_coefficient(out.allowed, psi) / acceptance,
      .postselected = postselect,
  };
}

// Dense coding over an n_parties GHZ resource; n_parties = 2 is EPR.
ProtocolResult dense_impl(Message message, NoiseLevel noise, int n_parties, bool postselect,
                          std::optional<std::vector<int>> affected) {
  if (message.a1 > 1 || message.a2 > 1) throw std::invalid_argument("message bits must be 0/1");
  const int n = n_parties;
  StateVector state = ghz_state(Label(std::vector<std::uint8_t>(n_parties, 0)));
  const int alice[] = {0};
  // X^a2 Z^a1 on Alice's qubit.
  state = apply(pauli_power(gates::pauli_z(), message.a1), alice, state);
  state = apply(pauli_power(gates::pauli_x(), message.a2), alice, state);

  const NoiseSpec spec(noise, affected.value_or(range_of(0, n)));
  const Matrix rho = apply_bitflip(DensityMatrix::from_pure(state).entries(), n, spec);

  const MeasurementBasis basis = ghz_basis(n_parties);
  const std::vector<int> all = range_of(0, n);
  const Operator scalar_one = Operator::Identity(1, 1);
  auto out = run_pipeline(
      rho, n, basis, all, [&](const Label&) -> const Operator& { return scalar_one; },
      [](const Label& l) { return l.tail_uniform(); });

  std::vector<std::uint8_t> expected_bits(static_cast<std::size_t>(n_parties),
                                          static_cast<std::uint8_t>(message.a2));
  expected_bits[0] = static_cast<std::uint8_t>(message.a1);
  const Label expected(std::move(expected_bits));

  if (postselect && !(out.allowed_mass > tol_norm())) {
    throw InternalError("post-selection retained no probability");
  }
  const double acceptance = postselect ? out.allowed_mass : 1.0;
  // Register after Bob's measurement: sum_l p_l |phi_l><phi_l| over kept labels.
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix dephased = Matrix::Zero(dim, dim);
  for (const auto& e : basis.elements()) {
    if (postselect && !e.label.tail_uniform()) continue;
    dephased += out.distribution.at(e.label) * e.projector();
  }
  DensityMatrix output = DensityMatrix::normalized(dephased);
  const double fid = fidelity(output, ghz_state(expected));
  return ProtocolResult{
      .output_state = std::move(output),
      .fidelity_to_target = fid,
      .outcome_distribution = out.distribution,
      .allowed_labels = allowed_label_set(basis),
      .detected_probability = out.disallowed_mass,
      .acceptance_rate = acceptance,
      .desired_component_weight = out.distribution.at(expected) / acceptance,
      .postselected = postselect,
  };
}

void check_epr_task(const EprTask& task) {
  const int n = task.n_qubits();
  if (task.epr_label.m > 1 || task.epr_label.n > 1) {
    throw std::invalid_argument("EPR label bits must be 0/1");
  }
  check_qubit_indices(task.measured_qubits, n);
  const int e1 = task.first_epr_qubit();
  const int e2 = task.second_epr_qubit();
  const bool touches_pair = std::any_of(task.measured_qubits.begin(), task.measured_qubits.end(),
                                        [&](int q) { return q == e1 || q == e2; });
  if (!touches_pair) {
    throw std::invalid_argument("the Bell measurement must involve an EPR qubit");
  }
  if (n - 2 < 1) throw std::invalid_argument("task has no unmeasured qubits");
  const Eigen::Index rdim = Eigen::Index{1} << (n - 2);
  for (unsigned m = 0; m < 2; ++m) {
    for (unsigned k = 0; k < 2; ++k) {
      auto it = task.correction_unitaries.find(BellLabel{m, k});
      if (it == task.correction_unitaries.end()) {
        throw std::invalid_argument("missing correction for Bell label");
      }
      if (it->second.rows() != rdim || it->second.cols() != rdim) {
        throw std::invalid_argument("correction has the wrong dimension");
      }
      if (!is_unitary(it->second, tol_norm())) {
        throw std::invalid_argument("correction is not unitary");
      }
    }
  }
}

// Label (m, n, n, ..., n) of width `width`.
Label repeated_tail(unsigned m, unsigned n, int width) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width), static_cast<std::uint8_t>(n));
  bits[0] = static_cast<std::uint8_t>(m);
  return Label(std::move(bits));
}

}  // namespace

// ---------------------------------------------------------------------------

StateVector TeleportInput::psi() const {
  Vector v(2);
  v << alpha0, alpha1;
  return StateVector(std::move(v));
}

double desired_coefficient(const Matrix& bob, const StateVector& psi) {
  if (bob.rows() != psi.dim()) throw std::invalid_argument("desired_coefficient: shape mismatch");
  const Vector& a = psi.amplitudes();
  const Vector w = gates::pauli_x() * a;
  const double f1 = a.dot(bob * a).real();
  const double f2 = w.dot(bob * w).real();
  const double s = std::norm(a.dot(w));
  const double det = 1.0 - s * s;
  if (det < 1e-8) return f1;
  return (f1 - s * f2) / det;
}

ProtocolResult teleport_epr(const TeleportInput& input) {
  return teleport_impl(input, 2, false);
}

ProtocolResult teleport_ghz(const TeleportInput& input, bool postselect) {
  return teleport_impl(input, 3, postselect);
}

ProtocolResult dense_epr(Message message, NoiseLevel noise,
                         std::optional<std::vector<int>> affected) {
  return dense_impl(message, noise, 2, false, std::move(affected));
}

ProtocolResult dense_ghz(Message message, NoiseLevel noise, bool postselect,
                         std::optional<std::vector<int>> affected) {
  return dense_impl(message, noise, 3, postselect, std::move(affected));
}

// ---------------------------------------------------------------------------

std::vector<int> EprTask::unmeasured_qubits() const {
  return complement(measured_qubits, n_qubits());
}

DensityMatrix EprTask::initial_state() const {
  const DensityMatrix pair = DensityMatrix::from_pure(bell_state(epr_label));
  return system_state ? tensor(*system_state, pair) : pair;
}

std::vector<int> GhzTask::unmeasured_qubits() const {
  return complement(measured_qubits, n_qubits());
}

const Operator& GhzTask::correction_for(const Label& label) const {
  auto it = correction_unitaries.find(label);
  if (it != correction_unitaries.end()) return it->second;
  return correction_unitaries.at(repeated_tail(label[0], label[1], n_parties()));
}

GhzTask lift_epr_task(const EprTask& task, int n_parties) {
  if (n_parties < 2 || n_parties > 10) {
    throw std::invalid_argument("lifting supports 2..10 parties");
  }
  check_epr_task(task);
  const int n_old = task.n_qubits();
  const int n_new = n_old + n_parties - 2;
  const int e1 = task.first_epr_qubit();
  const int e2 = task.second_epr_qubit();
  const int b = task.measured_qubits[1];
  if (n_parties > 2) {
    const bool copies_b = b == e2 || (b == e1 && task.epr_label.n == 0);
    if (!copies_b) {
      throw std::invalid_argument(
          "second measured qubit must carry the same computational value as the "
          "second EPR qubit");
    }
  }

  Matrix rho = task.initial_state().entries();
  if (n_parties > 2) {
    const DensityMatrix ancillas =
        DensityMatrix::from_pure(StateVector::basis(n_parties - 2, 0));
    rho = tensor(rho, ancillas.entries());
  }
  std::vector<int> measured = {task.measured_qubits[0], task.measured_qubits[1]};
  for (int anc = n_old; anc < n_new; ++anc) {
    const int pair[] = {e2, anc};
    rho = conjugate(gates::cnot(), pair, rho, n_new);
    measured.push_back(anc);
  }

  GhzTask lifted{DensityMatrix(std::move(rho)), std::move(measured), {}, {}};
  for (const auto& [bell, u] : task.correction_unitaries) {
    lifted.correction_unitaries.emplace(repeated_tail(bell.m, bell.n, n_parties), u);
  }
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n_parties); ++idx) {
    Label l = Label::from_index(n_parties, idx);
    if (!l.tail_uniform()) lifted.disallowed_labels.insert(std::move(l));
  }
  return lifted;
}

ProtocolResult run_lifted_with_noise(const GhzTask& task, NoiseLevel noise, bool postselect) {
  const int n = task.n_qubits();
  const MeasurementBasis basis = ghz_basis(task.n_parties());
  const NoiseSpec spec(noise, task.measured_qubits);
  spec.validate(n);

  auto correction = [&](const Label& l) -> const Operator& { return task.correction_for(l); };
  auto allowed = [&](const Label& l) { return !task.disallowed_labels.contains(l); };
  const Matrix& rho0 = task.initial_state.entries();

  const auto noiseless = run_pipeline(rho0, n, basis, task.measured_qubits, correction, allowed);
  const DensityMatrix target = DensityMatrix::normalized(noiseless.allowed);

  auto out = run_pipeline(apply_bitflip(rho0, n, spec), n, basis, task.measured_qubits,
                          correction, allowed);
  if (postselect && !(out.allowed_mass > tol_norm())) {
    throw InternalError("post-selection retained no probability");
  }
  const double acceptance = postselect ? out.allowed_mass : 1.0;

  // Credit every noise branch whose retained output is the noiseless result.
  double credited = 0.0;
  for (const auto& branch : bitflip_branches(spec)) {
    if (branch.weight <= 0.0) continue;
    const auto b = run_pipeline(flip_bits(rho0, n, branch.flipped), n, basis,
                                task.measured_qubits, correction, allowed);
    if (b.allowed_mass <= tol_norm()) continue;
    if (trace_distance(b.allowed / b.allowed_mass, target.entries()) <= tol_norm()) {
      credited += branch.weight * b.allowed_mass;
    }
  }

  std::set<Label> allowed_labels;
  for (const auto& e : basis.elements()) {
    if (allowed(e.label)) allowed_labels.insert(e.label);
  }
  DensityMatrix output = DensityMatrix::normalized(postselect ? out.allowed : out.all);
  const double fid = fidelity(output, target);
  return ProtocolResult{
      .output_state = std::move(output),
      .fidelity_to_target = fid,
      .outcome_distribution = std::move(out.distribution),
      .allowed_labels = std::move(allowed_labels),
      .detected_probability = out.disallowed_mass,
      .acceptance_rate = acceptance,
      .desired_component_weight = credited / acceptance,
      .postselected = postselect,
  };
}

ProtocolResult run_epr_task(const EprTask& task, NoiseLevel noise) {
  return run_lifted_with_noise(lift_epr_task(task, 2), noise, false);
}

EprTask teleportation_task(const StateVector& psi) {
  if (psi.n_qubits() != 1) throw std::invalid_argument("teleportation input must be one qubit");
  EprTask task;
  task.system_state = DensityMatrix::from_pure(psi);
  task.epr_label = {0, 0};
  task.measured_qubits = {0, 1};
  for (unsigned m = 0; m < 2; ++m) {
    for (unsigned k = 0; k < 2; ++k) {
      task.correction_unitaries.emplace(BellLabel{m, k}, teleport_correction(m, k));
    }
  }
  return task;
}

EprTask dense_coding_task(Message message) {
  if (message.a1 > 1 || message.a2 > 1) throw std::invalid_argument("message bits must be 0/1");
  EprTask task;
  task.system_state = DensityMatrix::from_pure(StateVector::basis(2, 0));
  task.epr_label = {message.a1, message.a2};
  task.measured_qubits = {2, 3};
  for (unsigned m = 0; m < 2; ++m) {
    for (unsigned k = 0; k < 2; ++k) {
      task.correction_unitaries.emplace(
          BellLabel{m, k},
          tensor(pauli_power(gates::pauli_x(), m), pauli_power(gates::pauli_x(), k)));
    }
  }
  return task;
}

// ---------------------------------------------------------------------------

double nghz_efficiency_closed_form(int n_parties, double p) {
  if (n_parties < 2) throw std::invalid_argument("need at least two parties");
  const double n = static_cast<double>(n_parties);
  if (!(p >= 0.0) || n * p >= 1.0) {
    throw DomainError("efficiency needs 0 <= N*p < 1");
  }
  return (1.0 - n * p) / (1.0 - (n - 1.0) * p);
}

NghzEfficiency nghz_efficiency(int n_parties, double p) {
  NghzEfficiency r;
  r.n_parties = n_parties;
  r.p = p;
  r.closed_form = nghz_efficiency_closed_form(n_parties, p);
  // Generic input: X|Psi> is not parallel to |Psi>.
  const double theta = 0.3;
  Vector v(2);
  v << std::cos(theta), std::polar(std::sin(theta), 0.7);
  const GhzTask task = lift_epr_task(teleportation_task(StateVector(std::move(v))), n_parties);
  const ProtocolResult sim =
      run_lifted_with_noise(task, NoiseLevel{p, NoiseMode::kFirstOrder}, true);
  r.simulated_success = sim.desired_component_weight;
  r.simulated_acceptance = sim.acceptance_rate;
  r.detection_possible = n_parties >= 3;
  r.discrepancy = std::abs(r.closed_form - r.simulated_success);
  if (r.detection_possible && r.discrepancy > tol_norm()) {
    throw InternalError("N-partite efficiency: closed form " + std::to_string(r.closed_form) +
                        " vs simulated " + std::to_string(r.simulated_success));
  }
  return r;
}

OptimalNReport scan_optimal_n(double p, int n_max) {
  if (n_max < 3) throw std::invalid_argument("n_max must be at least 3");
  if (!(p >= 0.0) || p * n_max >= 1.0) {
    throw DomainError("optimal-N scan needs 0 <= p < 1/n_max");
  }
  OptimalNReport report;
  report.p = p;
  report.epr_baseline = 1.0 - 2.0 * p;
  double best = -1.0;
  double worst = 2.0;
  for (int n = 3; n <= n_max; ++n) {
    const double e = nghz_efficiency_closed_form(n, p);
    report.efficiencies.emplace_back(n, e);
    if (e > best) {
      best = e;
      report.best = n;
    }
    worst = std::min(worst, e);
  }
  report.degenerate = best - worst <= tol_norm();
  return report;
}

int optimal_n(double p, int n_max) { return scan_optimal_n(p, n_max).best; }

}  // namespace ghzguard
