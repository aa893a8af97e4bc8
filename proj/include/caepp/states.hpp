#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

// Bell-diagonal states, Pauli channels over {I, Z, X, Y}, and the
// coefficient-level maps between them.
//
// Indexing convention used throughout the library: a Pauli error is a pair
// (x, z) where x flags a bit flip and z a phase flip, stored at position
// (x << 1) | z.  For channels the four weights are
//   (p00, p01, p10, p11) = (I, Z, X, Y),
// and for Bell-diagonal states the four coefficients are
//   (q00, q01, q10, q11) = (phi+, phi-, psi+, psi-),
// i.e. the Bell state obtained by applying X^x Z^z to one half of phi+.
// The two orderings line up under the Choi map: sending one half of phi+
// through the channel (p00,p01,p10,p11) yields the Bell-diagonal state with
// the same four numbers as coefficients.

namespace caepp {

// Probability/coefficient vectors whose total deviates from 1 by less than
// this are silently renormalized; larger deviations are rejected.
inline constexpr double kNormTolerance = 1e-9;

// Thrown when a round's success probability is exactly zero: there is no
// post-selected output state to condition on.
class protocol_abort_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PauliChannel {
 public:
  // probs = (p_I, p_Z, p_X, p_Y).  Entries must be nonnegative and sum to 1
  // within kNormTolerance (the vector is renormalized when it is off).
  explicit PauliChannel(const std::array<double, 4>& probs);

  double prob(int x, int z) const { return probs_[(x << 1) | z]; }
  const std::array<double, 4>& probs() const { return probs_; }

  bool operator==(const PauliChannel&) const = default;

 private:
  std::array<double, 4> probs_;
};

class BellDiagonalState {
 public:
  // coeffs = (q_phi+, q_phi-, q_psi+, q_psi-), validated like PauliChannel.
  explicit BellDiagonalState(const std::array<double, 4>& coeffs);

  double coeff(int x, int z) const { return coeffs_[(x << 1) | z]; }
  const std::array<double, 4>& coeffs() const { return coeffs_; }

  bool operator==(const BellDiagonalState&) const = default;

 private:
  std::array<double, 4> coeffs_;
};

// Diagonal mixture over the eight GHZ basis states
// |G_abc> = Z^c (x) X^a (x) X^b |GHZ>, coefficient at (a << 2)|(b << 1)|c.
// Qubit order is (Alice, Bob, Carol); a and b are bit-flip indices on Bob's
// and Carol's shares, c is the collective phase bit.
class GHZDiagonalState {
 public:
  explicit GHZDiagonalState(const std::array<double, 8>& coeffs);

  double coeff(int a, int b, int c) const {
    return coeffs_[(a << 2) | (b << 1) | c];
  }
  const std::array<double, 8>& coeffs() const { return coeffs_; }

  bool operator==(const GHZDiagonalState&) const = default;

 private:
  std::array<double, 8> coeffs_;
};

// Named single-parameter channel families.
//   depolarizing: (p00, r/3, r/3, r/3)                  with r = 1 - p00
//   biased:       (p00, r/5, 2r/5, 2r/5)
//   flip:         (p00, 0, gamma*r, delta*r), gamma + delta = 1
//   custom:       explicit four-vector, p00/gamma/delta ignored
struct ChannelSpec {
  enum class Family { depolarizing, biased, flip, custom };
  Family family = Family::depolarizing;
  double p00 = 1.0;
  double gamma = 1.0;
  double delta = 0.0;
  std::array<double, 4> custom{1.0, 0.0, 0.0, 0.0};
};

PauliChannel make_channel(const ChannelSpec& spec);
PauliChannel depolarizing_channel(double p00);
PauliChannel biased_channel(double p00);
PauliChannel flip_channel(double p00, double gamma = 1.0, double delta = 0.0);

// Choi state of the channel and its inverse; both are componentwise.
BellDiagonalState choi_state(const PauliChannel& channel);
PauliChannel as_channel(const BellDiagonalState& state);

// Entanglement fidelity <phi+|rho|phi+> = q00.
double fidelity(const BellDiagonalState& state);

// A Pauli channel is entanglement breaking iff no weight exceeds 1/2.
bool is_entanglement_breaking(const PauliChannel& channel);

// Sorts coefficients descending (ties keep the lower index first) and
// reports the permutation: result.state.coeffs()[i] == in.coeffs()[perm[i]].
struct CanonicalOrder {
  BellDiagonalState state;
  std::array<int, 4> permutation;
};
CanonicalOrder canonical_order(const BellDiagonalState& state);

// Coefficient action of Rx(+pi/2) (x) Rx(-pi/2) on a Bell-diagonal state:
// swaps the phi- and psi- weights.  Involutive.
BellDiagonalState preprocess_swap(const BellDiagonalState& state);

// Matching conjugation of the transmission channel (Rx rotations before and
// after the wire): swaps the Z and Y weights.  Involutive.
PauliChannel channel_encdec_swap(const PauliChannel& channel);

// Twirl to isotropic form, preserving the fidelity: (F, r/3, r/3, r/3).
BellDiagonalState twirl_isotropic(const BellDiagonalState& state);

}  // namespace caepp
