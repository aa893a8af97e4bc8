#include "caepp/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace caepp {

namespace {

// Shared validation for probability-style vectors: nonnegative entries
// (with a tiny grace band for accumulated rounding) and unit total within
// kNormTolerance.  Entries are never rescaled -- a hidden renormalization
// would shift exact inputs by an ulp and break bitwise identities
// downstream (componentwise Choi round trips, the two-way update rule,
// channels sitting exactly on the entanglement-breaking boundary).
template <size_t N>
std::array<double, N> checked(std::array<double, N> v, const char* what) {
  double sum = 0.0;
  for (double& e : v) {
    if (!(e >= -1e-12) || !std::isfinite(e)) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and nonnegative");
    }
    if (e < 0.0) e = 0.0;
    sum += e;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
  return v;
}

}  // namespace

PauliChannel::PauliChannel(const std::array<double, 4>& probs)
    : probs_(checked(probs, "PauliChannel")) {}

BellDiagonalState::BellDiagonalState(const std::array<double, 4>& coeffs)
    : coeffs_(checked(coeffs, "BellDiagonalState")) {}

GHZDiagonalState::GHZDiagonalState(const std::array<double, 8>& coeffs)
    : coeffs_(checked(coeffs, "GHZDiagonalState")) {}

PauliChannel make_channel(const ChannelSpec& spec) {
  using Family = ChannelSpec::Family;
  if (spec.family == Family::custom) {
    return PauliChannel(spec.custom);
  }
  if (!(spec.p00 >= 0.0 && spec.p00 <= 1.0)) {
    throw std::invalid_argument("make_channel: p00 must lie in [0, 1]");
  }
  const double r = 1.0 - spec.p00;
  switch (spec.family) {
    case Family::depolarizing:
      return PauliChannel({spec.p00, r / 3.0, r / 3.0, r / 3.0});
    case Family::biased:
      return PauliChannel({spec.p00, r / 5.0, 2.0 * r / 5.0, 2.0 * r / 5.0});
    case Family::flip: {
      if (!(spec.gamma >= 0.0) || !(spec.delta >= 0.0) ||
          std::abs(spec.gamma + spec.delta - 1.0) > kNormTolerance) {
        throw std::invalid_argument(
            "make_channel: flip family needs gamma, delta >= 0 with "
            "gamma + delta = 1");
      }
      return PauliChannel({spec.p00, 0.0, spec.gamma * r, spec.delta * r});
    }
    default:
      throw std::invalid_argument("make_channel: unknown family");
  }
}

PauliChannel depolarizing_channel(double p00) {
  return make_channel({ChannelSpec::Family::depolarizing, p00});
}

PauliChannel biased_channel(double p00) {
  return make_channel({ChannelSpec::Family::biased, p00});
}

PauliChannel flip_channel(double p00, double gamma, double delta) {
  return make_channel({ChannelSpec::Family::flip, p00, gamma, delta});
}

BellDiagonalState choi_state(const PauliChannel& channel) {
  return BellDiagonalState(channel.probs());
}

PauliChannel as_channel(const BellDiagonalState& state) {
  return PauliChannel(state.coeffs());
}

double fidelity(const BellDiagonalState& state) { return state.coeff(0, 0); }

bool is_entanglement_breaking(const PauliChannel& channel) {
  const auto& p = channel.probs();
  return *std::max_element(p.begin(), p.end()) <= 0.5;
}

CanonicalOrder canonical_order(const BellDiagonalState& state) {
  std::array<int, 4> perm{0, 1, 2, 3};
  const auto& c = state.coeffs();
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return c[a] > c[b]; });
  std::array<double, 4> sorted;
  for (int i = 0; i < 4; ++i) sorted[i] = c[perm[i]];
  return {BellDiagonalState(sorted), perm};
}

BellDiagonalState preprocess_swap(const BellDiagonalState& state) {
  const auto& q = state.coeffs();
  return BellDiagonalState({q[0], q[3], q[2], q[1]});
}

PauliChannel channel_encdec_swap(const PauliChannel& channel) {
  const auto& p = channel.probs();
  return PauliChannel({p[0], p[3], p[2], p[1]});
}

BellDiagonalState twirl_isotropic(const BellDiagonalState& state) {
  const double f = state.coeff(0, 0);
  const double r = (1.0 - f) / 3.0;
  return BellDiagonalState({f, r, r, r});
}

}  // namespace caepp
