#pragma once

#include "caepp/states.hpp"

// Tripartite round: Alice holds one qubit of a GHZ-diagonal state with Bob
// and Carol and sends one carrier to each; both carriers must come back
// clean for the round to be declared a Success.

namespace caepp {

// GHZ-diagonal coefficients of the state obtained by distributing a GHZ
// triple through Pauli channels toward Bob (ab) and Carol (ac):
//   s_abc = sum_k ab.prob(a, k) * ac.prob(b, k xor c).
GHZDiagonalState ghz_init(const PauliChannel& ab, const PauliChannel& ac);

struct GhzRoundOutcome {
  double p_succ = 0.0;
  GHZDiagonalState state{{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}};
  double fidelity = 0.0;  // overlap with G000 = state.coeff(0, 0, 0)
};

// One round on the shared state r using carrier-pair error coefficients s
// (the ghz_init combination of the two carrier channels):
//   out(a, b, c) = sum_k r(a, b, k) * s(a, b, k xor c),
// normalized by p_succ = sum of all eight entries.
GhzRoundOutcome ghz_round(const GHZDiagonalState& r,
                          const GHZDiagonalState& s);

}  // namespace caepp
