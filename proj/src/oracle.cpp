#include "caepp/oracle.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace caepp {

namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

using cd = std::complex<double>;

constexpr double kOracleTol = 1e-10;
constexpr double kDiagonalWarnTol = 1e-9;

Matrix2cd pauli_matrix(int x, int z) {
  Matrix2cd m;
  if (x == 0 && z == 0) {
    m << 1, 0, 0, 1;
  } else if (x == 0 && z == 1) {
    m << 1, 0, 0, -1;  // Z
  } else if (x == 1 && z == 0) {
    m << 0, 1, 1, 0;  // X
  } else {
    m << 0, cd(0, -1), cd(0, 1), 0;  // Y
  }
  return m;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatrixXcd embed_single(const Matrix2cd& u, size_t q, size_t n) {
  MatrixXcd full = MatrixXcd::Identity(1, 1);
  for (size_t k = 0; k < n; ++k) {
    full = kron(full, k == q ? MatrixXcd(u)
                             : MatrixXcd(Matrix2cd::Identity()));
  }
  return full;
}

void check_qubit(size_t q, size_t n, const char* where) {
  if (q >= n) {
    throw std::out_of_range(std::string(where) + ": qubit index out of range");
  }
}

// Unnormalized projection of the listed qubits onto the given outcomes;
// returns the branch probability and the reduced (traced) block.
std::pair<double, MatrixXcd> extract_branch(const DenseState& st,
                                            const std::vector<size_t>& qubits,
                                            uint64_t outcomes) {
  const size_t n = st.num_qubits();
  uint64_t measured_mask = 0;
  uint64_t want = 0;
  for (size_t i = 0; i < qubits.size(); ++i) {
    check_qubit(qubits[i], n, "measure_z_postselect");
    const uint64_t bit = 1ull << (n - 1 - qubits[i]);
    if (measured_mask & bit) {
      throw std::invalid_argument("measure_z_postselect: duplicate qubit");
    }
    measured_mask |= bit;
    if ((outcomes >> i) & 1) want |= bit;
  }
  std::vector<size_t> kept;
  for (size_t q = 0; q < n; ++q) {
    if (!(measured_mask & (1ull << (n - 1 - q)))) kept.push_back(q);
  }
  const size_t nk = kept.size();
  const size_t rdim = size_t(1) << nk;
  std::vector<uint64_t> full_index(rdim);
  for (uint64_t ri = 0; ri < rdim; ++ri) {
    uint64_t fi = want;
    for (size_t i = 0; i < nk; ++i) {
      if ((ri >> (nk - 1 - i)) & 1) fi |= 1ull << (n - 1 - kept[i]);
    }
    full_index[ri] = fi;
  }
  MatrixXcd block(rdim, rdim);
  for (uint64_t ri = 0; ri < rdim; ++ri) {
    for (uint64_t rj = 0; rj < rdim; ++rj) {
      block(ri, rj) = st.density()(full_index[ri], full_index[rj]);
    }
  }
  return {block.trace().real(), std::move(block)};
}

void check_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

PauliChannel memory_channel(double e) {
  return PauliChannel({1.0 - 0.75 * e, 0.25 * e, 0.25 * e, 0.25 * e});
}

// <v_i| rho |v_j> overlaps against a complete orthonormal family; warns
// when the off-diagonal mass says the state is not diagonal in it.
template <size_t N>
std::array<double, N> diagonal_overlaps(const MatrixXcd& rho,
                                        const std::array<VectorXcd, N>& basis,
                                        const char* what) {
  std::array<double, N> diag{};
  double offdiag = 0.0;
  for (size_t i = 0; i < N; ++i) {
    for (size_t j = 0; j < N; ++j) {
      const cd overlap = basis[i].dot(rho * basis[j]);
      if (i == j) {
        diag[i] = overlap.real();
      } else {
        offdiag += std::norm(overlap);
      }
    }
  }
  if (offdiag > kDiagonalWarnTol) {
    std::cerr << "warning: " << what
              << ": off-diagonal mass " << offdiag << " exceeds "
              << kDiagonalWarnTol << "\n";
  }
  return diag;
}

}  // namespace

DenseState::DenseState(size_t num_qubits) : n_(num_qubits) {
  if (n_ < 1 || n_ > kMaxDenseQubits) {
    throw std::invalid_argument("DenseState: supports 1 to 6 qubits");
  }
  rho_ = MatrixXcd::Zero(Eigen::Index(dim()), Eigen::Index(dim()));
  rho_(0, 0) = 1.0;
}

DenseState::DenseState(size_t num_qubits, const Eigen::VectorXcd& pure)
    : DenseState(num_qubits) {
  if (pure.size() != Eigen::Index(dim())) {
    throw std::invalid_argument("DenseState: vector dimension mismatch");
  }
  rho_ = pure * pure.adjoint();
}

DenseState::DenseState(size_t num_qubits, Eigen::MatrixXcd density)
    : DenseState(num_qubits) {
  if (density.rows() != Eigen::Index(dim()) ||
      density.cols() != Eigen::Index(dim())) {
    throw std::invalid_argument("DenseState: matrix dimension mismatch");
  }
  rho_ = std::move(density);
}

void DenseState::apply_single(const Eigen::Matrix2cd& u, size_t q) {
  check_qubit(q, n_, "apply_single");
  const MatrixXcd full = embed_single(u, q, n_);
  rho_ = full * rho_ * full.adjoint();
}

void DenseState::apply_h(size_t q) {
  Matrix2cd h;
  h << 1, 1, 1, -1;
  apply_single(h / std::sqrt(2.0), q);
}

void DenseState::apply_rx(size_t q, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix2cd rx;
  rx << cd(c, 0), cd(0, -s), cd(0, -s), cd(c, 0);
  apply_single(rx, q);
}

void DenseState::apply_cnot(size_t control, size_t target) {
  check_qubit(control, n_, "apply_cnot");
  check_qubit(target, n_, "apply_cnot");
  if (control == target) {
    throw std::invalid_argument("apply_cnot: control equals target");
  }
  Matrix2cd p0, p1;
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  const MatrixXcd full = embed_single(p0, control, n_) +
                         embed_single(p1, control, n_) *
                             embed_single(pauli_matrix(1, 0), target, n_);
  rho_ = full * rho_ * full.adjoint();
}

void DenseState::apply_clifford(const CliffordCircuit& circuit, bool reversed,
                                const std::vector<size_t>& qubit_map) {
  std::vector<size_t> map = qubit_map;
  if (map.empty()) {
    map.resize(circuit.num_qubits());
    std::iota(map.begin(), map.end(), size_t(0));
  }
  if (map.size() != circuit.num_qubits()) {
    throw std::invalid_argument("apply_clifford: qubit map size mismatch");
  }
  const auto run = [&](const Gate& g) {
    if (g.kind == Gate::Kind::H) {
      apply_h(map[g.q0]);
    } else {
      apply_cnot(map[g.q0], map[g.q1]);
    }
  };
  const auto& gates = circuit.gates();
  if (reversed) {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) run(*it);
  } else {
    for (const Gate& g : gates) run(g);
  }
}

void DenseState::apply_pauli_channel(const PauliChannel& channel, size_t q) {
  check_qubit(q, n_, "apply_pauli_channel");
  MatrixXcd out = MatrixXcd::Zero(rho_.rows(), rho_.cols());
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const double p = channel.prob(x, z);
      if (p == 0.0) continue;
      const MatrixXcd full = embed_single(pauli_matrix(x, z), q, n_);
      out += p * (full * rho_ * full.adjoint());
    }
  }
  rho_ = std::move(out);
}

void DenseState::validate() const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kOracleTol) {
    throw std::logic_error("DenseState: density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace().real() - 1.0) > kOracleTol ||
      std::abs(rho_.trace().imag()) > kOracleTol) {
    throw std::logic_error("DenseState: trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(
      0.5 * (rho_ + rho_.adjoint()));
  if (solver.eigenvalues().minCoeff() < -kOracleTol) {
    throw std::logic_error("DenseState: negative eigenvalue");
  }
}

Postselection measure_z_postselect(const DenseState& st,
                                   const std::vector<size_t>& qubits,
                                   uint64_t outcomes) {
  auto [p, block] = extract_branch(st, qubits, outcomes);
  if (p <= 0.0) {
    throw protocol_abort_error(
        "measurement branch has zero probability");
  }
  return {p, DenseState(st.num_qubits() - qubits.size(),
                        MatrixXcd(block / p))};
}

BellDiagonalState bell_coefficients(const DenseState& st) {
  if (st.num_qubits() != 2) {
    throw std::invalid_argument("bell_coefficients: needs a 2-qubit state");
  }
  const double s = 1.0 / std::sqrt(2.0);
  std::array<VectorXcd, 4> basis;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      // (I (x) X^x Z^z) |phi+>, dropping the global phase.
      VectorXcd v = VectorXcd::Zero(4);
      v(0 | x) = s;                      // |0>|x>
      v(2 | (1 - x)) = (z ? -s : s);     // |1>|1-x>, sign from Z^z
      basis[(x << 1) | z] = v;
    }
  }
  const auto diag =
      diagonal_overlaps<4>(st.density(), basis, "bell_coefficients");
  return BellDiagonalState(diag);
}

GHZDiagonalState ghz_coefficients(const DenseState& st) {
  if (st.num_qubits() != 3) {
    throw std::invalid_argument("ghz_coefficients: needs a 3-qubit state");
  }
  const double s = 1.0 / std::sqrt(2.0);
  std::array<VectorXcd, 8> basis;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        VectorXcd v = VectorXcd::Zero(8);
        v((a << 1) | b) = s;                                // |0,a,b>
        v(4 | ((1 - a) << 1) | (1 - b)) = (c ? -s : s);     // |1,1-a,1-b>
        basis[(a << 2) | (b << 1) | c] = v;
      }
    }
  }
  const auto diag =
      diagonal_overlaps<8>(st.density(), basis, "ghz_coefficients");
  return GHZDiagonalState(diag);
}

RoundOutcome dense_caepp_round(const BellDiagonalState& state,
                               const StabilizerCode& code,
                               const PauliChannel& channel, bool pre_process,
                               double memory_error, double measurement_flip) {
  check_rate(memory_error, "memory_error");
  check_rate(measurement_flip, "measurement_flip");
  const size_t m = code.num_carriers();
  const size_t n = m + 2;
  if (n > kMaxDenseQubits) {
    throw std::invalid_argument("dense_caepp_round: needs m + 2 <= 6 qubits");
  }
  const CliffordCircuit circuit = encoding_circuit(code);
  constexpr double half_pi = std::numbers::pi / 2.0;

  // Qubits: 0 = Alice's shared half, 1 = Bob's, 2..m+1 = carriers.
  VectorXcd psi = VectorXcd::Zero(Eigen::Index(1) << n);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi((1ull << (n - 1)) | (1ull << (n - 2))) = 1.0 / std::sqrt(2.0);
  DenseState st(n, psi);

  st.apply_pauli_channel(as_channel(state), 1);
  if (pre_process) {
    st.apply_rx(0, half_pi);
    st.apply_rx(1, -half_pi);
  }

  std::vector<size_t> enc_map(m + 1), dec_map(m + 1);
  enc_map[0] = 0;
  dec_map[0] = 1;
  for (size_t k = 1; k <= m; ++k) enc_map[k] = dec_map[k] = k + 1;
  st.apply_clifford(circuit, /*reversed=*/false, enc_map);

  for (size_t k = 0; k < m; ++k) {
    const size_t q = 2 + k;
    if (pre_process) st.apply_rx(q, half_pi);
    st.apply_pauli_channel(channel, q);
    if (pre_process) st.apply_rx(q, -half_pi);
  }

  if (memory_error > 0.0) {
    const PauliChannel mem = memory_channel(memory_error);
    st.apply_pauli_channel(mem, 0);
    st.apply_pauli_channel(mem, 1);
  }

  st.apply_clifford(circuit, /*reversed=*/true, dec_map);

  std::vector<size_t> carriers(m);
  for (size_t k = 0; k < m; ++k) carriers[k] = 2 + k;
  const double f = measurement_flip;
  double p_succ = 0.0;
  MatrixXcd accepted = MatrixXcd::Zero(4, 4);
  for (uint64_t pattern = 0; pattern < (uint64_t(1) << m); ++pattern) {
    double declare_clear = 1.0;
    for (size_t k = 0; k < m; ++k) {
      declare_clear *= ((pattern >> k) & 1) ? f : (1.0 - f);
    }
    if (declare_clear == 0.0) continue;
    auto [p, block] = extract_branch(st, carriers, pattern);
    p_succ += declare_clear * p;
    accepted += declare_clear * block;
  }
  if (p_succ <= 0.0) {
    throw protocol_abort_error(
        "round cannot succeed: acceptance probability is zero");
  }
  const BellDiagonalState out =
      bell_coefficients(DenseState(2, MatrixXcd(accepted / p_succ)));
  return {p_succ, out, out.coeff(0, 0)};
}

RoundOutcome dense_twepp_round(const BellDiagonalState& a,
                               const BellDiagonalState& b,
                               TweppVariant variant, double memory_error,
                               double measurement_flip) {
  check_rate(memory_error, "memory_error");
  check_rate(measurement_flip, "measurement_flip");
  constexpr double half_pi = std::numbers::pi / 2.0;
  const BellDiagonalState pa =
      variant == TweppVariant::bbpssw ? twirl_isotropic(a) : a;
  const BellDiagonalState pb =
      variant == TweppVariant::bbpssw ? twirl_isotropic(b) : b;

  // Qubits: 0 = Alice kept, 1 = Bob kept, 2 = Alice consumed, 3 = Bob
  // consumed; the pairs are (0,1) and (2,3).
  VectorXcd psi = VectorXcd::Zero(16);
  psi(0b0000) = 0.5;
  psi(0b0011) = 0.5;
  psi(0b1100) = 0.5;
  psi(0b1111) = 0.5;
  DenseState st(4, psi);
  st.apply_pauli_channel(as_channel(pa), 1);
  st.apply_pauli_channel(as_channel(pb), 3);

  if (variant == TweppVariant::dejmps) {
    st.apply_rx(0, half_pi);
    st.apply_rx(1, -half_pi);
    st.apply_rx(2, half_pi);
    st.apply_rx(3, -half_pi);
  }

  if (memory_error > 0.0) {
    const PauliChannel mem = memory_channel(memory_error);
    for (size_t q = 0; q < 4; ++q) st.apply_pauli_channel(mem, q);
  }

  st.apply_cnot(0, 2);
  st.apply_cnot(1, 3);

  const double f = measurement_flip;
  const double agree = (1.0 - f) * (1.0 - f) + f * f;
  const double disagree = 2.0 * f * (1.0 - f);
  double p_succ = 0.0;
  MatrixXcd accepted = MatrixXcd::Zero(4, 4);
  for (uint64_t pattern = 0; pattern < 4; ++pattern) {
    const bool same = ((pattern ^ (pattern >> 1)) & 1) == 0;
    const double declare_equal = same ? agree : disagree;
    if (declare_equal == 0.0) continue;
    auto [p, block] = extract_branch(st, {2, 3}, pattern);
    p_succ += declare_equal * p;
    accepted += declare_equal * block;
  }
  if (p_succ <= 0.0) {
    throw protocol_abort_error(
        "round cannot succeed: acceptance probability is zero");
  }
  const BellDiagonalState out =
      bell_coefficients(DenseState(2, MatrixXcd(accepted / p_succ)));
  return {p_succ, out, out.coeff(0, 0)};
}

GhzRoundOutcome dense_ghz_round(const GHZDiagonalState& r,
                                const PauliChannel& channel_b,
                                const PauliChannel& channel_c) {
  // Qubits: 0 = Alice, 1 = Bob, 2 = Carol, 3 = Bob's carrier, 4 = Carol's.
  const double s = 1.0 / std::sqrt(2.0);
  MatrixXcd rho = MatrixXcd::Zero(32, 32);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        VectorXcd v = VectorXcd::Zero(32);
        v(((a << 1) | b) << 2) = s;  // |0,a,b,0,0>
        v((4 | ((1 - a) << 1) | (1 - b)) << 2) = (c ? -s : s);
        rho += r.coeff(a, b, c) * (v * v.adjoint());
      }
    }
  }
  DenseState st(5, std::move(rho));

  st.apply_cnot(0, 3);
  st.apply_cnot(0, 4);
  st.apply_pauli_channel(channel_b, 3);
  st.apply_pauli_channel(channel_c, 4);
  st.apply_cnot(1, 3);
  st.apply_cnot(2, 4);

  const Postselection branch = measure_z_postselect(st, {3, 4}, 0);
  const GHZDiagonalState out = ghz_coefficients(branch.state);
  return {branch.probability, out, out.coeff(0, 0, 0)};
}

}  // namespace caepp
