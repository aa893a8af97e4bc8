#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <random>

#include "caepp/ghz.hpp"
#include "caepp/states.hpp"
#include "doctest.h"

using namespace caepp;

namespace {

GHZDiagonalState random_ghz(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::array<double, 8> r{};
  double total = 0.0;
  for (double& v : r) {
    v = u(rng);
    total += v;
  }
  for (double& v : r) v /= total;
  return GHZDiagonalState(r);
}

// Independent re-derivation: accumulate r x s over the phase bits directly.
GhzRoundOutcome quadruple_loop(const GHZDiagonalState& r,
                               const GHZDiagonalState& s) {
  std::array<double, 8> out{};
  double p = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int cr = 0; cr < 2; ++cr) {
        for (int cs = 0; cs < 2; ++cs) {
          const double w = r.coeff(a, b, cr) * s.coeff(a, b, cs);
          out[(a << 2) | (b << 1) | (cr ^ cs)] += w;
          p += w;
        }
      }
    }
  }
  for (double& v : out) v /= p;
  const GHZDiagonalState state(out);
  return {p, state, state.coeff(0, 0, 0)};
}

}  // namespace

TEST_CASE("distribution through identity channels is a clean GHZ triple") {
  const PauliChannel id({1, 0, 0, 0});
  const GHZDiagonalState s = ghz_init(id, id);
  CHECK(s.coeff(0, 0, 0) == 1.0);
  const GhzRoundOutcome out = ghz_round(s, s);
  CHECK(out.p_succ == 1.0);
  CHECK(out.fidelity == 1.0);
}

TEST_CASE("distribution combines the two channels' phase bits") {
  const GHZDiagonalState s =
      ghz_init(depolarizing_channel(0.75), depolarizing_channel(0.75));
  // X components multiply independently; Z components fold together.
  CHECK(s.coeff(0, 0, 0) ==
        doctest::Approx(0.5625 + 1.0 / 144).epsilon(1e-14));
  CHECK(s.coeff(0, 0, 1) ==
        doctest::Approx(2 * 0.75 * (1.0 / 12)).epsilon(1e-14));
  double total = 0.0;
  for (double v : s.coeffs()) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  // Asymmetric links: b indexes the Alice-Carol flip.
  const GHZDiagonalState t = ghz_init(PauliChannel({1, 0, 0, 0}),
                                      PauliChannel({0, 0, 1, 0}));
  CHECK(t.coeff(0, 1, 0) == 1.0);
}

TEST_CASE("round matches the quadruple-loop oracle on random inputs") {
  std::mt19937 rng(93);
  for (int trial = 0; trial < 100; ++trial) {
    const GHZDiagonalState r = random_ghz(rng);
    const GHZDiagonalState s = random_ghz(rng);
    const GhzRoundOutcome fast = ghz_round(r, s);
    const GhzRoundOutcome slow = quadruple_loop(r, s);
    CHECK(fast.p_succ == doctest::Approx(slow.p_succ).epsilon(1e-13));
    CHECK(fast.fidelity == doctest::Approx(slow.fidelity).epsilon(1e-13));
    for (int i = 0; i < 8; ++i) {
      CHECK(fast.state.coeffs()[i] ==
            doctest::Approx(slow.state.coeffs()[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("noiseless carriers purify the phase sector") {
  std::mt19937 rng(95);
  const GHZDiagonalState s = ghz_init(PauliChannel({1, 0, 0, 0}),
                                      PauliChannel({1, 0, 0, 0}));
  for (int trial = 0; trial < 20; ++trial) {
    const GHZDiagonalState r = random_ghz(rng);
    const GhzRoundOutcome out = ghz_round(r, s);
    const double r000 = r.coeff(0, 0, 0);
    const double r001 = r.coeff(0, 0, 1);
    CHECK(out.p_succ == doctest::Approx(r000 + r001).epsilon(1e-14));
    CHECK(out.fidelity ==
          doctest::Approx(r000 / (r000 + r001)).epsilon(1e-14));
  }
}

TEST_CASE("rounds filter branch errors but scramble the phase bit") {
  const GHZDiagonalState s =
      ghz_init(depolarizing_channel(0.8), depolarizing_channel(0.8));
  GHZDiagonalState r = s;
  // Round 1 improves the fidelity: acceptance strips most of the branch
  // (a, b) error weight.
  GhzRoundOutcome out = ghz_round(r, s);
  CHECK(out.fidelity > s.coeff(0, 0, 0));
  r = out.state;
  // Every later round XORs in fresh phase noise from the carrier pair, so
  // while the branch sector keeps purifying, the phase bit mixes and the
  // fidelity decays toward 1/2 from above.
  double prev = out.fidelity;
  for (int round = 2; round <= 40; ++round) {
    out = ghz_round(r, s);
    r = out.state;
    CHECK(out.p_succ > 0.0);
    CHECK(out.p_succ <= 1.0 + 1e-12);
    CHECK(out.fidelity < prev);
    CHECK(out.fidelity > 0.5);
    prev = out.fidelity;
  }
  CHECK(r.coeff(0, 0, 0) + r.coeff(0, 0, 1) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.fidelity == doctest::Approx(0.5).epsilon(2e-6));
  // Conditioned acceptance settles at the carrier pair's clean-branch
  // weight.
  CHECK(out.p_succ ==
        doctest::Approx(s.coeff(0, 0, 0) + s.coeff(0, 0, 1)).epsilon(1e-9));
}

TEST_CASE("disjoint supports abort the round") {
  // Shared state fully flipped on Bob's share, carrier distribution clean:
  // no (a, b) sector overlaps.
  const GHZDiagonalState r({0, 0, 0, 0, 0.5, 0.5, 0, 0});
  const GHZDiagonalState s({1, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(ghz_round(r, s), protocol_abort_error);
}
