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

#include "ghzguard/qcore.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace ghzguard {

namespace {

double read_tolerance_env() {
  const char* raw = std::getenv("GHZGUARD_TOL");
  if (raw == nullptr) return kDefaultTolNorm;
  double value = 0.0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || !(value > 0.0) || !std::isfinite(value)) {
    return kDefaultTolNorm;
  }
  return value;
}

void check_register_size(int n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw std::invalid_argument("register of " + std::to_string(n_qubits) +
                                " qubits exceeds the dense limit of " +
                                std::to_string(kMaxQubits));
  }
}

// Spreads the bits of a local index over the positions of `targets`.
std::vector<std::uint64_t> target_offsets(std::span<const int> targets, int n_qubits) {
  const std::size_t k = targets.size();
  std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t local = 0; local < offsets.size(); ++local) {
    std::uint64_t full = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if ((local >> (k - 1 - t)) & 1U) full |= qubit_mask(targets[t], n_qubits);
    }
    offsets[local] = full;
  }
  return offsets;
}

std::uint64_t combined_mask(std::span<const int> qubits, int n_qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) mask |= qubit_mask(q, n_qubits);
  return mask;
}

void apply_in_place(const Operator& op, const std::vector<std::uint64_t>& offsets,
                    std::uint64_t target_mask, Complex* data, std::uint64_t dim) {
  const std::size_t local_dim = offsets.size();
  std::vector<Complex> buffer(local_dim);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) buffer[l] = data[base | offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t l = 0; l < local_dim; ++l) acc += op(r, l) * buffer[l];
      data[base | offsets[r]] = acc;
    }
  }
}

void check_operator_shape(const Operator& op, std::span<const int> targets) {
  const Eigen::Index expected = Eigen::Index{1} << targets.size();
  if (op.rows() != expected || op.cols() != expected) {
    throw std::invalid_argument("operator shape does not match target count");
  }
}

}  // namespace

double tol_norm() {
  static const double value = read_tolerance_env();
  return value;
}

double tol_eig() { return kDefaultTolEig; }

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two >= 2");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

void check_qubit_indices(std::span<const int> qubits, int n_qubits) {
  std::vector<int> seen(qubits.begin(), qubits.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("duplicate qubit index");
  }
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(q) +
                                  " out of range for " + std::to_string(n_qubits) +
                                  "-qubit register");
    }
  }
}

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(Vector amplitudes)
    : n_qubits_(qubits_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  check_register_size(n_qubits_);
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol_norm()) {
    throw std::invalid_argument("state vector is not normalized (|psi|^2 = " +
                                std::to_string(norm2) + ")");
  }
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  check_register_size(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) {
    throw std::invalid_argument("basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bits(const std::string& bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit string: " + bits);
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return basis(static_cast<int>(bits.size()), index);
}

DensityMatrix::DensityMatrix(Matrix entries) : n_qubits_(0), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  n_qubits_ = qubits_for_dimension(entries_.rows());
  check_register_size(n_qubits_);
  const double herm_err = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol_norm()) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol_norm()) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr.real()));
  }
  const double min_eig = hermitian_eigenvalues(entries_).minCoeff();
  if (min_eig < -tol_eig()) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  check_register_size(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::normalized(const Matrix& entries) {
  const double tr = entries.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("cannot normalize a zero-trace matrix");
  return DensityMatrix(entries / tr);
}

// ---------------------------------------------------------------------------
// Products and reductions

Operator tensor(const Operator& a, const Operator& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > (Eigen::Index{1} << kMaxQubits) || cols > (Eigen::Index{1} << kMaxQubits)) {
    throw std::invalid_argument("tensor product exceeds the dense limit");
  }
  Operator out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  check_register_size(a.n_qubits() + b.n_qubits());
  Vector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
  }
  return StateVector(std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  check_register_size(a.n_qubits() + b.n_qubits());
  return DensityMatrix(tensor(a.entries(), b.entries()));
}

Matrix partial_trace(const Matrix& m, int n_qubits, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  check_qubit_indices(keep, n_qubits);
  if (m.rows() != (Eigen::Index{1} << n_qubits) || m.cols() != m.rows()) {
    throw std::invalid_argument("partial_trace: matrix shape does not match qubit count");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<int> traced;
  for (int q = 0; q < n_qubits; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const auto kept_off = target_offsets(kept, n_qubits);
  const auto traced_off = target_offsets(traced, n_qubits);
  const auto kdim = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(kdim, kdim);
  for (Eigen::Index i = 0; i < kdim; ++i) {
    for (Eigen::Index j = 0; j < kdim; ++j) {
      Complex acc{0.0, 0.0};
      for (std::uint64_t t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[i] | t),
                 static_cast<Eigen::Index>(kept_off[j] | t));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return DensityMatrix::normalized(partial_trace(rho.entries(), rho.n_qubits(), keep));
}

// ---------------------------------------------------------------------------
// Figures of merit

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex value = psi.amplitudes().dot(rho.entries() * psi.amplitudes());
  if (std::abs(value.imag()) > tol_norm()) {
    throw InternalError("fidelity: imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

namespace {

// Square roots of PSD eigenvalues; values at the level of rounding noise are
// treated as zero, since their roots (~1e-8) would dominate the error.
Eigen::VectorXd psd_roots(const Eigen::VectorXd& ev) {
  const double cut = 1e-13 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.unaryExpr([cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.entries());
  if (solver.info() != Eigen::Success) {
    throw InternalError("Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd roots = psd_roots(solver.eigenvalues());
  const Matrix sqrt_a =
      solver.eigenvectors() * roots.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  const Matrix inner = sqrt_a * b.entries() * sqrt_a;
  const double root_trace = psd_roots(hermitian_eigenvalues(0.5 * (inner + inner.adjoint()))).sum();
  return root_trace * root_trace;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InternalError("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: shape mismatch");
  }
  const Matrix diff = a - b;
  return 0.5 * hermitian_eigenvalues(0.5 * (diff + diff.adjoint())).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.entries(), b.entries());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(rho.entries())) {
    if (lambda > tol_eig()) s -= lambda * std::log2(lambda);
  }
  return s;
}

double entanglement_entropy(const StateVector& psi, std::span<const int> partition) {
  return von_neumann_entropy(partial_trace(DensityMatrix::from_pure(psi), partition));
}

// ---------------------------------------------------------------------------
// Gates and kernels

namespace gates {

Operator identity(int n_qubits) {
  check_register_size(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return Operator::Identity(dim, dim);
}

Operator pauli_x() {
  Operator x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

Operator pauli_y() {
  Operator y(2, 2);
  y << 0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0;
  return y;
}

Operator pauli_z() {
  Operator z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

Operator hadamard() {
  Operator h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Operator cnot() {
  Operator c = Operator::Zero(4, 4);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 3) = 1.0;
  c(3, 2) = 1.0;
  return c;
}

}  // namespace gates

bool is_unitary(const Operator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  const Operator prod = op.adjoint() * op;
  return (prod - Operator::Identity(op.rows(), op.cols())).cwiseAbs().maxCoeff() <= tol;
}

Operator embed(const Operator& op, std::span<const int> targets, int n_qubits) {
  check_qubit_indices(targets, n_qubits);
  check_operator_shape(op, targets);
  return apply_left(op, targets, gates::identity(n_qubits), n_qubits);
}

Vector apply(const Operator& op, std::span<const int> targets, const Vector& v,
             int n_qubits) {
  check_qubit_indices(targets, n_qubits);
  check_operator_shape(op, targets);
  if (v.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("apply: vector length does not match qubit count");
  }
  Vector out = v;
  apply_in_place(op, target_offsets(targets, n_qubits), combined_mask(targets, n_qubits),
                 out.data(), static_cast<std::uint64_t>(out.size()));
  return out;
}

StateVector apply(const Operator& op, std::span<const int> targets,
                  const StateVector& psi) {
  return StateVector(apply(op, targets, psi.amplitudes(), psi.n_qubits()));
}

Matrix apply_left(const Operator& op, std::span<const int> targets, const Matrix& m,
                  int n_qubits) {
  check_qubit_indices(targets, n_qubits);
  check_operator_shape(op, targets);
  if (m.rows() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("apply_left: row count does not match qubit count");
  }
  Matrix out = m;
  const auto offsets = target_offsets(targets, n_qubits);
  const auto mask = combined_mask(targets, n_qubits);
  // Eigen is column-major: each column is a contiguous state vector.
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    apply_in_place(op, offsets, mask, out.col(c).data(),
                   static_cast<std::uint64_t>(out.rows()));
  }
  return out;
}

Matrix conjugate(const Operator& op, std::span<const int> targets, const Matrix& m,
                 int n_qubits) {
  const Matrix left = apply_left(op, targets, m, n_qubits);
  return apply_left(op, targets, left.adjoint(), n_qubits).adjoint();
}

Matrix flip_bits(const Matrix& m, int n_qubits, std::span<const int> qubits) {
  check_qubit_indices(qubits, n_qubits);
  const auto mask = static_cast<Eigen::Index>(combined_mask(qubits, n_qubits));
  if (mask == 0) return m;
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = m(i ^ mask, j ^ mask);
  }
  return out;
}

Matrix phase_flip_bits(const Matrix& m, int n_qubits, std::span<const int> qubits) {
  check_qubit_indices(qubits, n_qubits);
  const auto mask = combined_mask(qubits, n_qubits);
  if (mask == 0) return m;
  Matrix out = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const int pj = std::popcount(static_cast<std::uint64_t>(j) & mask) & 1;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const int pi = std::popcount(static_cast<std::uint64_t>(i) & mask) & 1;
      if (pi != pj) out(i, j) = -m(i, j);
    }
  }
  return out;
}

}  // namespace ghzguard
