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

#include "ghzguard/bases.hpp"
#include "ghzguard/qcore.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ghzguard {
namespace {

constexpr double kTol = 1e-12;

Vector random_ket(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(std::int64_t{1} << n);
  for (auto& a : v) a = Complex(g(rng), g(rng));
  return v / v.norm();
}

Matrix random_density(int n, std::mt19937_64& rng) {
  const std::int64_t d = std::int64_t{1} << n;
  Matrix a(d, d);
  std::normal_distribution<double> g;
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Operator random_unitary(int n, std::mt19937_64& rng) {
  const std::int64_t d = std::int64_t{1} << n;
  Matrix a(d, d);
  std::normal_distribution<double> g;
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

TEST(StateVector, RejectsUnnormalizedInput) {
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector{v}, std::invalid_argument);
  Vector odd(3);
  odd << 1.0, 0.0, 0.0;
  EXPECT_THROW(StateVector{odd}, std::invalid_argument);
}

TEST(StateVector, BasisAndBitStringsAgree) {
  const StateVector a = StateVector::from_bits("101");
  const StateVector b = StateVector::basis(3, 5);
  EXPECT_EQ(a.n_qubits(), 3);
  EXPECT_LT((a.amplitudes() - b.amplitudes()).norm(), kTol);
  EXPECT_THROW(StateVector::from_bits("10x"), std::invalid_argument);
  EXPECT_THROW(StateVector::basis(2, 4), std::invalid_argument);
}

TEST(DensityMatrix, ValidatesHermiticityTraceAndPositivity) {
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  EXPECT_NO_THROW(DensityMatrix{m});
  Matrix non_herm = m;
  non_herm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{non_herm}, std::invalid_argument);
  EXPECT_THROW(DensityMatrix{Matrix::Identity(2, 2)}, std::invalid_argument);
  Matrix negative(2, 2);
  negative << 1.2, 0, 0, -0.2;
  EXPECT_THROW(DensityMatrix{negative}, std::invalid_argument);
  EXPECT_THROW(DensityMatrix::normalized(Matrix::Zero(2, 2)), std::invalid_argument);
}

TEST(Tensor, MatchesNaiveKronecker) {
  std::mt19937_64 rng(11);
  const Operator a = random_unitary(1, rng);
  const Operator b = random_unitary(2, rng);
  EXPECT_LT((tensor(a, b) - oracle::kron(a, b)).norm(), kTol);

  const StateVector u(random_ket(1, rng));
  const StateVector v(random_ket(2, rng));
  EXPECT_LT((tensor(u, v).amplitudes() - oracle::kron(u.amplitudes(), v.amplitudes())).norm(),
            kTol);
  EXPECT_EQ(tensor(u, v).n_qubits(), 3);
}

TEST(PartialTrace, MatchesExplicitIndexSums) {
  std::mt19937_64 rng(12);
  const int n = 4;
  const DensityMatrix rho(random_density(n, rng));
  for (int first = 0; first < n; ++first) {
    for (int k = 1; first + k <= n; ++k) {
      std::vector<int> keep;
      for (int q = first; q < first + k; ++q) keep.push_back(q);
      const Matrix expected = oracle::reduce_to_block(rho.entries(), n, first, k);
      EXPECT_LT((partial_trace(rho, keep).entries() - expected).norm(), kTol)
          << "first=" << first << " k=" << k;
    }
  }
}

TEST(PartialTrace, KeepOrderIsAscendingAndTraceIsPreserved) {
  std::mt19937_64 rng(13);
  const DensityMatrix rho(random_density(3, rng));
  const int a[] = {2, 0};
  const int b[] = {0, 2};
  EXPECT_LT((partial_trace(rho, a).entries() - partial_trace(rho, b).entries()).norm(), kTol);
  EXPECT_NEAR(partial_trace(rho, a).entries().trace().real(), 1.0, kTol);
  const int bad[] = {3};
  EXPECT_THROW(partial_trace(rho, bad), std::invalid_argument);
}

TEST(Embed, AgreesWithKroneckerOfIdentities) {
  std::mt19937_64 rng(14);
  const Operator g = random_unitary(1, rng);
  for (int q = 0; q < 3; ++q) {
    const int t[] = {q};
    EXPECT_LT((embed(g, t, 3) - oracle::on(g, q, 3)).norm(), kTol);
  }
  // Reversed targets on a two-qubit gate swap its roles.
  const int rev[] = {1, 0};
  const Operator cnot_rev = embed(gates::cnot(), rev, 2);
  const Operator swap = embed(gates::cnot(), std::vector<int>{0, 1}, 2) * cnot_rev *
                        embed(gates::cnot(), std::vector<int>{0, 1}, 2);
  Matrix expected_swap = Matrix::Zero(4, 4);
  expected_swap(0, 0) = expected_swap(1, 2) = expected_swap(2, 1) = expected_swap(3, 3) = 1.0;
  EXPECT_LT((swap - expected_swap).norm(), kTol);
}

TEST(Apply, VectorMatrixAndConjugateKernelsAgreeWithEmbedding) {
  std::mt19937_64 rng(15);
  const int n = 4;
  const Operator u = random_unitary(2, rng);
  const int targets[] = {3, 1};
  const Operator full = embed(u, targets, n);
  const Vector v = random_ket(n, rng);
  const Matrix rho = random_density(n, rng);
  EXPECT_LT((apply(u, targets, v, n) - full * v).norm(), kTol);
  EXPECT_LT((apply_left(u, targets, rho, n) - full * rho).norm(), kTol);
  EXPECT_LT((conjugate(u, targets, rho, n) - full * rho * full.adjoint()).norm(), kTol);
}

TEST(Apply, BitAndPhaseFlipsMatchPauliConjugation) {
  std::mt19937_64 rng(16);
  const int n = 3;
  const Matrix rho = random_density(n, rng);
  const int qs[] = {0, 2};
  const Matrix x = oracle::on(oracle::X(), 0, n) * oracle::on(oracle::X(), 2, n);
  const Matrix z = oracle::on(oracle::Z(), 0, n) * oracle::on(oracle::Z(), 2, n);
  EXPECT_LT((flip_bits(rho, n, qs) - x * rho * x).norm(), kTol);
  EXPECT_LT((phase_flip_bits(rho, n, qs) - z * rho * z).norm(), kTol);
}

TEST(Gates, AreUnitaryAndCnotUsesFirstQubitAsControl) {
  for (const Operator& g : {gates::pauli_x(), gates::pauli_y(), gates::pauli_z(),
                            gates::hadamard(), gates::cnot(), gates::identity(3)}) {
    EXPECT_TRUE(is_unitary(g, 1e-12));
  }
  const StateVector out = apply(gates::cnot(), std::vector<int>{0, 1}, StateVector::from_bits("10"));
  EXPECT_NEAR(std::abs(out[3]), 1.0, kTol);
  Matrix not_unitary = Matrix::Identity(2, 2);
  not_unitary(0, 0) = 2.0;
  EXPECT_FALSE(is_unitary(not_unitary, 1e-12));
}

TEST(QubitIndices, RejectDuplicatesAndOutOfRange) {
  EXPECT_THROW(check_qubit_indices(std::vector<int>{0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(check_qubit_indices(std::vector<int>{2}, 2), std::invalid_argument);
  EXPECT_THROW(check_qubit_indices(std::vector<int>{-1}, 2), std::invalid_argument);
  EXPECT_NO_THROW(check_qubit_indices(std::vector<int>{1, 0}, 2));
  EXPECT_EQ(qubits_for_dimension(8), 3);
  EXPECT_THROW(qubits_for_dimension(6), std::invalid_argument);
}

TEST(Fidelity, PureAndUhlmannFormsAgreeForPureStates) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector psi(random_ket(2, rng));
    const StateVector phi(random_ket(2, rng));
    const double overlap = std::norm(psi.amplitudes().dot(phi.amplitudes()));
    EXPECT_NEAR(fidelity(DensityMatrix::from_pure(phi), psi), overlap, 1e-12);
    EXPECT_NEAR(fidelity(DensityMatrix::from_pure(phi), DensityMatrix::from_pure(psi)), overlap,
                1e-9);
    // Pure states: D = sqrt(1 - F).
    EXPECT_NEAR(trace_distance(DensityMatrix::from_pure(phi), DensityMatrix::from_pure(psi)),
                std::sqrt(1.0 - overlap), 1e-9);
  }
}

TEST(Fidelity, MixedStateValues) {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(1);
  EXPECT_NEAR(fidelity(mixed, StateVector::from_bits("0")), 0.5, kTol);
  EXPECT_NEAR(trace_distance(mixed, DensityMatrix::from_pure(StateVector::from_bits("1"))), 0.5,
              kTol);
  EXPECT_NEAR(fidelity(mixed, mixed), 1.0, 1e-9);
}

TEST(TraceDistance, IsAMetricOnRandomStates) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix a(random_density(2, rng));
    const DensityMatrix b(random_density(2, rng));
    const DensityMatrix c(random_density(2, rng));
    const double ab = trace_distance(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    EXPECT_NEAR(ab, trace_distance(b, a), 1e-12);
    EXPECT_LE(trace_distance(a, c), ab + trace_distance(b, c) + 1e-12);
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
  }
}

TEST(Entropy, KnownValues) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_pure(StateVector::from_bits("01"))), 0.0,
              1e-10);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(3)), 3.0, 1e-10);
  const int first[] = {0};
  EXPECT_NEAR(entanglement_entropy(bell_state({0, 0}), first), 1.0, 1e-10);
  EXPECT_NEAR(entanglement_entropy(StateVector::from_bits("00"), first), 0.0, 1e-10);
}

TEST(Entropy, PureStateBipartitionsAreSymmetric) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector psi(random_ket(3, rng));
    const int a[] = {0};
    const int b[] = {1, 2};
    EXPECT_NEAR(entanglement_entropy(psi, a), entanglement_entropy(psi, b), 1e-9);
  }
}

TEST(Eigen, HermitianEigenvaluesAscending) {
  Matrix m(2, 2);
  m << 2, Complex(0, 1), Complex(0, -1), 2;
  const Eigen::VectorXd ev = hermitian_eigenvalues(m);
  EXPECT_NEAR(ev(0), 1.0, kTol);
  EXPECT_NEAR(ev(1), 3.0, kTol);
}

TEST(Tolerances, DefaultsAreUsedWithoutOverride) {
  EXPECT_GT(tol_norm(), 0.0);
  EXPECT_DOUBLE_EQ(tol_eig(), kDefaultTolEig);
}

}  // namespace
}  // namespace ghzguard
