#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "caepp/ghz.hpp"
#include "caepp/pauli.hpp"
#include "caepp/rounds.hpp"
#include "caepp/states.hpp"

// Dense density-matrix reference simulator (up to 6 qubits).  Every
// protocol round in the library has a dense twin here that runs the actual
// circuit — explicit rotations instead of coefficient permutations, Kraus
// sums instead of error-string bookkeeping — so the fast engines can be
// checked against first-principles linear algebra.

namespace caepp {

inline constexpr size_t kMaxDenseQubits = 6;

// Qubit k corresponds to bit (n - 1 - k) of the computational-basis index,
// i.e. qubit 0 is the leftmost tensor factor.
class DenseState {
 public:
  explicit DenseState(size_t num_qubits);  // |0...0><0...0|
  DenseState(size_t num_qubits, const Eigen::VectorXcd& pure);
  DenseState(size_t num_qubits, Eigen::MatrixXcd density);

  size_t num_qubits() const { return n_; }
  size_t dim() const { return size_t(1) << n_; }
  const Eigen::MatrixXcd& density() const { return rho_; }

  void apply_h(size_t q);
  void apply_cnot(size_t control, size_t target);
  void apply_rx(size_t q, double angle);
  void apply_single(const Eigen::Matrix2cd& u, size_t q);
  // Runs the circuit's gates (in reverse order when reversed) with circuit
  // qubit i acting on this state's qubit qubit_map[i]; an empty map is the
  // identity mapping.
  void apply_clifford(const CliffordCircuit& circuit, bool reversed = false,
                      const std::vector<size_t>& qubit_map = {});
  void apply_pauli_channel(const PauliChannel& channel, size_t q);

  // Checks Hermiticity, unit trace, and positive semidefiniteness (within
  // 1e-10); throws std::logic_error on violation.
  void validate() const;

 private:
  size_t n_;
  Eigen::MatrixXcd rho_;
};

struct Postselection {
  double probability = 0.0;
  DenseState state{1};  // measured qubits traced out
};

// Projects the listed qubits onto the given Z outcomes (bit i of outcomes
// is the outcome demanded of qubits[i]) and renormalizes the rest.  Throws
// protocol_abort_error on a zero-probability branch.
Postselection measure_z_postselect(const DenseState& st,
                                   const std::vector<size_t>& qubits,
                                   uint64_t outcomes);

// Diagonal coefficients in the Bell (two-qubit) or GHZ (three-qubit)
// basis.  Warns on stderr when off-diagonal mass exceeds 1e-9: every state
// produced by this library should be exactly diagonal.
BellDiagonalState bell_coefficients(const DenseState& st);
GHZDiagonalState ghz_coefficients(const DenseState& st);

// Dense twins of the round engines.  Pre-processing is realized by real
// Rx(+-pi/2) rotations (shared halves and a rotation sandwich around the
// untouched carrier channel), not by permuting coefficients.
RoundOutcome dense_caepp_round(const BellDiagonalState& state,
                               const StabilizerCode& code,
                               const PauliChannel& channel, bool pre_process,
                               double memory_error = 0.0,
                               double measurement_flip = 0.0);

// The dejmps variant applies its swap as explicit rotations on all four
// qubits; bbpssw twirling (a coefficient average by definition) is applied
// to the input coefficients.
RoundOutcome dense_twepp_round(const BellDiagonalState& a,
                               const BellDiagonalState& b,
                               TweppVariant variant, double memory_error = 0.0,
                               double measurement_flip = 0.0);

GhzRoundOutcome dense_ghz_round(const GHZDiagonalState& r,
                                const PauliChannel& channel_b,
                                const PauliChannel& channel_c);

}  // namespace caepp
