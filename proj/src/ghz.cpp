#include "caepp/ghz.hpp"

#include <array>

namespace caepp {

GHZDiagonalState ghz_init(const PauliChannel& ab, const PauliChannel& ac) {
  std::array<double, 8> s{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (int k = 0; k < 2; ++k) {
          sum += ab.prob(a, k) * ac.prob(b, k ^ c);
        }
        s[(a << 2) | (b << 1) | c] = sum;
      }
    }
  }
  return GHZDiagonalState(s);
}

GhzRoundOutcome ghz_round(const GHZDiagonalState& r,
                          const GHZDiagonalState& s) {
  std::array<double, 8> n{};
  double p_succ = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (int k = 0; k < 2; ++k) {
          sum += r.coeff(a, b, k) * s.coeff(a, b, k ^ c);
        }
        n[(a << 2) | (b << 1) | c] = sum;
        p_succ += sum;
      }
    }
  }
  if (p_succ <= 0.0) {
    throw protocol_abort_error(
        "ghz round cannot succeed: acceptance probability is zero");
  }
  for (double& v : n) v /= p_succ;
  GHZDiagonalState out(n);
  return {p_succ, out, out.coeff(0, 0, 0)};
}

}  // namespace caepp
