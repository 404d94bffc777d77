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

#include <algorithm>
#include <cmath>

namespace ghzguard {

namespace {

std::vector<std::uint64_t> offsets_for(std::span<const int> qubits, int n_qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
  for (std::size_t local = 0; local < out.size(); ++local) {
    for (std::size_t t = 0; t < k; ++t) {
      if ((local >> (k - 1 - t)) & 1U) out[local] |= qubit_mask(qubits[t], n_qubits);
    }
  }
  return out;
}

void check_targets(const MeasurementBasis& basis, std::span<const int> targets,
                   int n_qubits) {
  if (static_cast<int>(targets.size()) != basis.n_qubits()) {
    throw std::invalid_argument("measurement targets do not match basis width");
  }
  check_qubit_indices(targets, n_qubits);
}

}  // namespace

// ---------------------------------------------------------------------------
// Labels

Label::Label(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("label entries must be bits");
  }
}

Label Label::from_string(const std::string& bits) {
  std::vector<std::uint8_t> v;
  v.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad label string: " + bits);
    v.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return Label(std::move(v));
}

Label Label::from_index(int width, std::uint64_t index) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) v[i] = static_cast<std::uint8_t>((index >> (width - 1 - i)) & 1U);
  return Label(std::move(v));
}

std::uint64_t Label::index() const {
  std::uint64_t idx = 0;
  for (auto b : bits_) idx = (idx << 1) | b;
  return idx;
}

std::string Label::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

bool Label::tail_uniform() const {
  if (bits_.size() < 2) return true;
  return std::all_of(bits_.begin() + 1, bits_.end(), [&](auto b) { return b == bits_[1]; });
}

// ---------------------------------------------------------------------------
// States

StateVector bell_state(BellLabel label) {
  if (label.m > 1 || label.n > 1) throw std::invalid_argument("Bell label bits must be 0/1");
  return ghz_state(label.to_label());
}

StateVector ghz_state(const Label& mu) {
  const int n = static_cast<int>(mu.size());
  if (n < 2) throw std::invalid_argument("GHZ state needs at least two parties");
  // |j, j xor mu_1, ...>: the j=0 term has bits (0, mu_1, ...), the j=1 term
  // has every bit complemented.
  std::uint64_t tail = 0;
  for (int i = 1; i < n; ++i) tail |= static_cast<std::uint64_t>(mu[i]) << (n - 1 - i);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  const double amp = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  v[static_cast<Eigen::Index>(tail)] = amp;
  v[static_cast<Eigen::Index>(tail ^ all)] = mu[0] ? -amp : amp;
  return StateVector(std::move(v));
}

// ---------------------------------------------------------------------------
// Bases

MeasurementBasis::MeasurementBasis(int n_qubits, std::vector<BasisElement> elements)
    : n_qubits_(n_qubits), elements_(std::move(elements)) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (static_cast<Eigen::Index>(elements_.size()) != dim) {
    throw std::invalid_argument("basis needs exactly 2^n elements");
  }
  Matrix kets(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& ket = elements_[static_cast<std::size_t>(i)].ket;
    if (ket.dim() != dim) throw std::invalid_argument("basis ket has the wrong width");
    kets.col(i) = ket.amplitudes();
  }
  // Orthonormal columns of a square matrix are also complete.
  const Matrix gram = kets.adjoint() * kets;
  if ((gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol_norm()) {
    throw std::invalid_argument("basis kets are not orthonormal");
  }
}

MeasurementBasis ghz_basis(int n_parties) {
  if (n_parties < 2) throw std::invalid_argument("GHZ basis needs at least two parties");
  if (n_parties > 10) throw std::invalid_argument("GHZ basis wider than 10 qubits");
  std::vector<BasisElement> elements;
  const std::uint64_t count = std::uint64_t{1} << n_parties;
  elements.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Label label = Label::from_index(n_parties, idx);
    StateVector ket = ghz_state(label);
    elements.push_back({std::move(label), std::move(ket)});
  }
  return MeasurementBasis(n_parties, std::move(elements));
}

MeasurementBasis bell_basis() { return ghz_basis(2); }

std::vector<int> complement(std::span<const int> targets, int n_qubits) {
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  }
  return rest;
}

// ---------------------------------------------------------------------------
// Measurement

std::vector<ConditionalBlock> project_out(const Matrix& rho, int n_qubits,
                                          const MeasurementBasis& basis,
                                          std::span<const int> targets) {
  check_targets(basis, targets, n_qubits);
  if (rho.rows() != (Eigen::Index{1} << n_qubits) || rho.cols() != rho.rows()) {
    throw std::invalid_argument("project_out: matrix shape does not match qubit count");
  }
  const std::vector<int> rest = complement(targets, n_qubits);
  const auto t_off = offsets_for(targets, n_qubits);
  const auto r_off = offsets_for(rest, n_qubits);
  const auto tdim = static_cast<Eigen::Index>(t_off.size());
  const auto rdim = static_cast<Eigen::Index>(r_off.size());
  const Eigen::Index dim = rho.rows();

  std::vector<ConditionalBlock> out;
  out.reserve(basis.size());
  Matrix partial(rdim, dim);
  for (const auto& element : basis.elements()) {
    const Vector& phi = element.ket.amplitudes();
    // partial(a, col) = sum_x conj(phi_x) rho((x, a), col)
    partial.setZero();
    for (Eigen::Index x = 0; x < tdim; ++x) {
      const Complex c = std::conj(phi[x]);
      if (c == Complex{0.0, 0.0}) continue;
      for (Eigen::Index a = 0; a < rdim; ++a) {
        partial.row(a) += c * rho.row(static_cast<Eigen::Index>(t_off[x] | r_off[a]));
      }
    }
    Matrix block = Matrix::Zero(rdim, rdim);
    for (Eigen::Index y = 0; y < tdim; ++y) {
      const Complex c = phi[y];
      if (c == Complex{0.0, 0.0}) continue;
      for (Eigen::Index b = 0; b < rdim; ++b) {
        block.col(b) += c * partial.col(static_cast<Eigen::Index>(t_off[y] | r_off[b]));
      }
    }
    const Complex tr = block.trace();
    if (std::abs(tr.imag()) > tol_norm()) {
      throw InternalError("outcome probability has an imaginary part");
    }
    out.push_back({element.label, tr.real(), std::move(block)});
  }
  return out;
}

std::vector<ConditionalKet> project_out(const Vector& psi, int n_qubits,
                                        const MeasurementBasis& basis,
                                        std::span<const int> targets) {
  check_targets(basis, targets, n_qubits);
  if (psi.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("project_out: vector length does not match qubit count");
  }
  const std::vector<int> rest = complement(targets, n_qubits);
  const auto t_off = offsets_for(targets, n_qubits);
  const auto r_off = offsets_for(rest, n_qubits);
  std::vector<ConditionalKet> out;
  out.reserve(basis.size());
  for (const auto& element : basis.elements()) {
    const Vector& phi = element.ket.amplitudes();
    Vector rem = Vector::Zero(static_cast<Eigen::Index>(r_off.size()));
    for (std::size_t x = 0; x < t_off.size(); ++x) {
      const Complex c = std::conj(phi[static_cast<Eigen::Index>(x)]);
      if (c == Complex{0.0, 0.0}) continue;
      for (std::size_t a = 0; a < r_off.size(); ++a) {
        rem[static_cast<Eigen::Index>(a)] += c * psi[static_cast<Eigen::Index>(t_off[x] | r_off[a])];
      }
    }
    const double prob = rem.squaredNorm();
    out.push_back({element.label, prob, std::move(rem)});
  }
  return out;
}

std::vector<MeasurementRecord> measure(const DensityMatrix& rho,
                                       const MeasurementBasis& basis,
                                       std::span<const int> targets) {
  const int n = rho.n_qubits();
  auto blocks = project_out(rho.entries(), n, basis, targets);
  const std::vector<int> rest = complement(targets, n);
  const auto t_off = offsets_for(targets, n);
  const auto r_off = offsets_for(rest, n);

  std::vector<MeasurementRecord> records;
  records.reserve(blocks.size());
  double total = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& block = blocks[i];
    if (block.probability < -tol_eig()) {
      throw InternalError("negative outcome probability for label " + block.label.to_string());
    }
    const double prob = std::max(block.probability, 0.0);
    total += prob;
    MeasurementRecord rec{block.label, prob, std::nullopt};
    if (prob > tol_norm()) {
      // |phi><phi| on targets (x) block on the rest, scattered into place.
      const Vector& phi = basis.elements()[i].ket.amplitudes();
      Matrix post = Matrix::Zero(rho.dim(), rho.dim());
      for (std::size_t x = 0; x < t_off.size(); ++x) {
        for (std::size_t y = 0; y < t_off.size(); ++y) {
          const Complex w = phi[static_cast<Eigen::Index>(x)] *
                            std::conj(phi[static_cast<Eigen::Index>(y)]);
          if (w == Complex{0.0, 0.0}) continue;
          for (std::size_t a = 0; a < r_off.size(); ++a) {
            for (std::size_t b = 0; b < r_off.size(); ++b) {
              post(static_cast<Eigen::Index>(t_off[x] | r_off[a]),
                   static_cast<Eigen::Index>(t_off[y] | r_off[b])) =
                  w * block.remainder(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
          }
        }
      }
      rec.post_state = DensityMatrix::normalized(post);
    }
    records.push_back(std::move(rec));
  }
  if (std::abs(total - 1.0) > tol_norm()) {
    throw InternalError("outcome probabilities sum to " + std::to_string(total));
  }
  return records;
}

}  // namespace ghzguard
