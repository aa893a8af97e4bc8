#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>

#include "caepp/states.hpp"
#include "doctest.h"

using namespace caepp;

TEST_CASE("probability vectors are validated but never rescaled") {
  CHECK_THROWS_AS(PauliChannel({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(PauliChannel({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonalState({0.9, 0.0, 0.0, 0.0}),
                  std::invalid_argument);

  // Within kNormTolerance the entries pass through bitwise: rescaling here
  // would make round trips through constructors lossy.
  const double eps = 0.5 * kNormTolerance;
  const PauliChannel ch({0.25 + eps, 0.25, 0.25, 0.25});
  CHECK(ch.probs() == std::array<double, 4>{0.25 + eps, 0.25, 0.25, 0.25});
}

TEST_CASE("indexing puts (x, z) at position (x << 1) | z") {
  const PauliChannel ch({0.4, 0.3, 0.2, 0.1});
  CHECK(ch.prob(0, 0) == 0.4);  // I
  CHECK(ch.prob(0, 1) == 0.3);  // Z
  CHECK(ch.prob(1, 0) == 0.2);  // X
  CHECK(ch.prob(1, 1) == 0.1);  // Y
  const GHZDiagonalState g({0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05});
  CHECK(g.coeff(0, 0, 0) == 0.3);
  CHECK(g.coeff(0, 0, 1) == 0.2);
  CHECK(g.coeff(1, 1, 1) == 0.05);
}

TEST_CASE("channel families") {
  const PauliChannel dep = depolarizing_channel(0.7);
  const double dep_rest = (1.0 - 0.7) / 3.0;  // one ulp above the 0.1 literal
  CHECK(dep.probs() ==
        std::array<double, 4>{0.7, dep_rest, dep_rest, dep_rest});

  const PauliChannel biased = biased_channel(0.5);
  CHECK(biased.prob(0, 0) == doctest::Approx(0.5));
  CHECK(biased.prob(0, 1) == doctest::Approx(0.1));
  CHECK(biased.prob(1, 0) == doctest::Approx(0.2));
  CHECK(biased.prob(1, 1) == doctest::Approx(0.2));

  const PauliChannel flip = flip_channel(0.75);
  CHECK(flip.probs() == std::array<double, 4>{0.75, 0.0, 0.25, 0.0});
  const PauliChannel flip_y = flip_channel(0.6, 0.25, 0.75);
  CHECK(flip_y.prob(1, 0) == doctest::Approx(0.1));
  CHECK(flip_y.prob(1, 1) == doctest::Approx(0.3));
  CHECK_THROWS_AS(flip_channel(0.6, 0.5, 0.2), std::invalid_argument);

  ChannelSpec spec;
  spec.family = ChannelSpec::Family::custom;
  spec.custom = {0.1, 0.2, 0.3, 0.4};
  CHECK(make_channel(spec).probs() == std::array<double, 4>{0.1, 0.2, 0.3, 0.4});
}

TEST_CASE("Choi map is componentwise and invertible") {
  const PauliChannel ch({0.6, 0.2, 0.15, 0.05});
  const BellDiagonalState state = choi_state(ch);
  CHECK(state.coeffs() == ch.probs());
  CHECK(as_channel(state).probs() == ch.probs());
  CHECK(fidelity(state) == 0.6);
}

TEST_CASE("entanglement breaking iff no weight exceeds one half") {
  CHECK(is_entanglement_breaking(PauliChannel({0.5, 0.5, 0.0, 0.0})));
  CHECK(is_entanglement_breaking(depolarizing_channel(0.5)));
  CHECK(is_entanglement_breaking(PauliChannel({0.25, 0.25, 0.25, 0.25})));
  CHECK_FALSE(is_entanglement_breaking(depolarizing_channel(0.75)));
  CHECK_FALSE(is_entanglement_breaking(PauliChannel({0.1, 0.51, 0.2, 0.19})));
}

TEST_CASE("canonical order sorts descending and reports the permutation") {
  const BellDiagonalState in({0.2, 0.4, 0.1, 0.3});
  const CanonicalOrder out = canonical_order(in);
  CHECK(out.state.coeffs() == std::array<double, 4>{0.4, 0.3, 0.2, 0.1});
  CHECK(out.permutation == std::array<int, 4>{1, 3, 0, 2});
  for (int i = 0; i < 4; ++i) {
    CHECK(out.state.coeffs()[i] == in.coeffs()[out.permutation[i]]);
  }

  // Ties keep the lower index first.
  const CanonicalOrder tied = canonical_order(
      BellDiagonalState({0.25, 0.25, 0.25, 0.25}));
  CHECK(tied.permutation == std::array<int, 4>{0, 1, 2, 3});
}

TEST_CASE("pre-processing swaps phi-/psi- weights; channel swap Z/Y") {
  const BellDiagonalState state({0.6, 0.2, 0.15, 0.05});
  const BellDiagonalState swapped = preprocess_swap(state);
  CHECK(swapped.coeffs() == std::array<double, 4>{0.6, 0.05, 0.15, 0.2});
  CHECK(preprocess_swap(swapped) == state);

  const PauliChannel ch({0.7, 0.2, 0.06, 0.04});
  const PauliChannel conj = channel_encdec_swap(ch);
  CHECK(conj.probs() == std::array<double, 4>{0.7, 0.04, 0.06, 0.2});
  CHECK(channel_encdec_swap(conj) == ch);
}

TEST_CASE("isotropic twirl keeps the fidelity and evens the rest") {
  const BellDiagonalState in({0.7, 0.2, 0.06, 0.04});
  const BellDiagonalState out = twirl_isotropic(in);
  CHECK(out.coeff(0, 0) == doctest::Approx(0.7));
  CHECK(out.coeff(0, 1) == doctest::Approx(0.1));
  CHECK(out.coeff(1, 0) == doctest::Approx(0.1));
  CHECK(out.coeff(1, 1) == doctest::Approx(0.1));
}
