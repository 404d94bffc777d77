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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzguard {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A dense complex operator. Unitarity or idempotence is checked by whoever
/// consumes it, not by the type.
using Operator = Matrix;

/// Largest register the dense kernels will build.
inline constexpr int kMaxQubits = 24;

inline constexpr double kDefaultTolNorm = 1e-10;
inline constexpr double kDefaultTolEig = 1e-9;

/// Normalization / hermiticity tolerance. Reads GHZGUARD_TOL once on first
/// use; falls back to kDefaultTolNorm when unset or unparsable.
double tol_norm();
/// Lower bound slack on eigenvalues of a valid density matrix.
double tol_eig();

/// Raised when a computed quantity violates an identity that must hold for
/// valid inputs (e.g. an expectation value with a large imaginary part).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Number of qubits whose Hilbert space has dimension `dim`.
/// Throws std::invalid_argument if `dim` is not a power of two.
int qubits_for_dimension(Eigen::Index dim);

/// Position of `qubit` inside a computational-basis index of an n-qubit
/// register. Qubit 0 is the most significant bit.
constexpr std::uint64_t qubit_mask(int qubit, int n_qubits) {
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

/// Normalized pure state of n >= 1 qubits.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Computational basis ket from a bit string such as "010".
  static StateVector from_bits(const std::string& bits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over n >= 1 qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);
  /// Divides by the trace first. Throws if the trace is not positive.
  static DensityMatrix normalized(const Matrix& entries);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const {
    return entries_(r, c);
  }

 private:
  int n_qubits_;
  Matrix entries_;
};

// Kronecker products. The left operand occupies the most significant qubits.
StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
Operator tensor(const Operator& a, const Operator& b);

/// Reduced state on `keep` (qubits reported in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Same reduction on a raw (possibly unnormalized) n-qubit matrix.
Matrix partial_trace(const Matrix& m, int n_qubits, std::span<const int> keep);

/// <psi|rho|psi>. Throws InternalError when the imaginary residue exceeds
/// tol_norm().
double fidelity(const DensityMatrix& rho, const StateVector& psi);

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

/// Base-2 von Neumann entropy, with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of the reduced state on `partition` for a pure state.
double entanglement_entropy(const StateVector& psi, std::span<const int> partition);

namespace gates {
Operator identity(int n_qubits);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator hadamard();
/// Control is the first (most significant) qubit.
Operator cnot();
}  // namespace gates

bool is_unitary(const Operator& op, double tol);

/// Full 2^n x 2^n operator acting as `op` on `targets` and identity elsewhere.
/// targets[0] is the most significant qubit of `op`.
Operator embed(const Operator& op, std::span<const int> targets, int n_qubits);

/// op applied to `targets` of an n-qubit vector.
Vector apply(const Operator& op, std::span<const int> targets, const Vector& v,
             int n_qubits);
StateVector apply(const Operator& op, std::span<const int> targets,
                  const StateVector& psi);

/// op * m on `targets`, acting on the row index.
Matrix apply_left(const Operator& op, std::span<const int> targets, const Matrix& m,
                  int n_qubits);
/// op * m * op^dagger on `targets`.
Matrix conjugate(const Operator& op, std::span<const int> targets, const Matrix& m,
                 int n_qubits);

/// X_q m X_q for every q in `qubits`, done as an index permutation.
Matrix flip_bits(const Matrix& m, int n_qubits, std::span<const int> qubits);
/// Z_q m Z_q for every q in `qubits`, done as a sign pattern.
Matrix phase_flip_bits(const Matrix& m, int n_qubits, std::span<const int> qubits);

/// Throws std::invalid_argument unless all indices are distinct and in range.
void check_qubit_indices(std::span<const int> qubits, int n_qubits);

}  // namespace ghzguard
