#pragma once

#include <cstddef>

#include "caepp/pauli.hpp"
#include "caepp/states.hpp"

// Single-round engines.  All of them are exact: the enumeration engine sums
// the full error-string distribution, the closed forms are algebraic
// identities of that sum, and the noisy variants enlarge the enumeration by
// the memory/measurement error bits instead of sampling.

namespace caepp {

// Largest carrier count the enumeration engines accept (4^(m+1) strings).
inline constexpr size_t kMaxEnumerationCarriers = 10;

struct RoundOutcome {
  double p_succ = 0.0;
  BellDiagonalState state{{1.0, 0.0, 0.0, 0.0}};  // conditioned on Success
  double fidelity = 0.0;                          // = state.coeff(0, 0)
};

// Input pre-processing applied by the two-way protocol before its rounds.
enum class TweppVariant { none, bbpssw, dejmps };

struct RoundConfig {
  StabilizerCode code = star_code(1);
  PauliChannel channel{{1.0, 0.0, 0.0, 0.0}};
  // Applies the phi-/psi- state swap and the matching Z/Y channel swap at
  // round entry, making the phase error the least likely survivor.
  bool pre_process = true;
  double memory_error = 0.0;      // e: depolarizing rate on stored qubits
  double measurement_flip = 0.0;  // f: outcome flip rate per measurement
  TweppVariant twepp_variant = TweppVariant::none;  // two-way path only
};

// One carrier-assisted round by exact enumeration: every error string on
// the shared qubit and the m carriers is weighted by
// state.coeff(x0, z0) * prod_k channel.prob(xk, zk), strings with a nonzero
// syndrome are rejected, and the survivors' residuals accumulate into the
// output coefficients.  Requires memory_error = measurement_flip = 0 (see
// noisy_round) and m <= kMaxEnumerationCarriers (use star_closed_form for
// larger star codes).  Throws protocol_abort_error when nothing survives.
RoundOutcome caepp_round(const BellDiagonalState& state,
                         const RoundConfig& cfg);

// Closed form of the single-carrier round.  With r = state coefficients and
// c = channel weights (after the optional pre-processing swaps):
//   n00 = r00 c00 + r01 c01    n01 = r00 c01 + r01 c00
//   n10 = r10 c10 + r11 c11    n11 = r10 c11 + r11 c10
// p_succ = sum(n), output = n / p_succ.
RoundOutcome caepp_round_closed_single(const BellDiagonalState& state,
                                       const PauliChannel& channel,
                                       bool pre_process);

// alpha = (4 p00 - 1)/3, a = ((1+alpha)/2)^m, b = ((1-alpha)/2)^m,
// c = alpha^m: the moments behind the star-code closed form.
struct AbcCoefficients {
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
AbcCoefficients abc_coefficients(double p00, size_t m);

// Closed form of the m-carrier star-code round over the depolarizing family
// (pre-processing absorbed into the map):
//   n00 = (A+C) q00 + B q11    n01 = (A+C) q11 + B q00
//   n10 = (A-C) q10 + B q01    n11 = (A-C) q01 + B q10
// Z = A + B + C (q00 + q11 - q01 - q10), p_succ = Z/2, output = n / Z.
RoundOutcome star_closed_form(const BellDiagonalState& state, double p00,
                              size_t m);

// One two-way round consuming a second pair b: variant pre-processing on
// both inputs, then the same update rule as caepp_round_closed_single with
// the channel weights replaced by b's coefficients.
RoundOutcome twepp_round(const BellDiagonalState& a,
                         const BellDiagonalState& b, TweppVariant variant);

// Enumeration round with noisy operations: every stored qubit (both halves
// of the shared pair) takes an extra depolarizing error of rate
// cfg.memory_error just before decoding, and each carrier measurement
// outcome flips independently with probability cfg.measurement_flip.
RoundOutcome noisy_round(const BellDiagonalState& state,
                         const RoundConfig& cfg);

// Two-way counterpart: four stored qubits (both halves of both pairs) take
// the memory error, and both parties' measurements can flip.
RoundOutcome noisy_twepp_round(const BellDiagonalState& a,
                               const BellDiagonalState& b,
                               TweppVariant variant, double memory_error,
                               double measurement_flip);

}  // namespace caepp
