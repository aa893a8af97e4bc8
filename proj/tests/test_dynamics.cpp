#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "caepp/dynamics.hpp"
#include "caepp/rounds.hpp"
#include "caepp/states.hpp"
#include "doctest.h"

using namespace caepp;

namespace {

RoundFn star_round(const PauliChannel& channel, size_t m = 1,
                   bool pre = true) {
  RoundConfig cfg;
  cfg.code = star_code(m);
  cfg.channel = channel;
  cfg.pre_process = pre;
  return [cfg](const BellDiagonalState& s) { return caepp_round(s, cfg); };
}

}  // namespace

TEST_CASE("trajectories accumulate the success probability") {
  const PauliChannel ch = depolarizing_channel(0.75);
  const Trajectory traj =
      run_trajectory(choi_state(ch), star_round(ch), 2);
  CHECK(traj.status == TrajectoryStatus::converged);
  REQUIRE(traj.points.size() == 2);
  CHECK(traj.points[0].round == 1);
  CHECK(traj.points[1].round == 2);
  CHECK(traj.points[0].fidelity == doctest::Approx(41.0 / 52).epsilon(1e-14));
  CHECK(traj.points[1].fidelity == doctest::Approx(37.0 / 44).epsilon(1e-14));
  CHECK(traj.points[1].cumulative_success ==
        doctest::Approx(traj.points[0].p_succ * traj.points[1].p_succ)
            .epsilon(1e-14));
  CHECK(traj.final_state.coeff(0, 0) ==
        doctest::Approx(traj.points[1].fidelity).epsilon(1e-14));
}

TEST_CASE("trajectories stop at the target fidelity") {
  const PauliChannel ch = flip_channel(0.75);
  const Trajectory traj =
      run_trajectory(choi_state(ch), star_round(ch), 50, 0.999);
  CHECK(traj.status == TrajectoryStatus::target_reached);
  CHECK(traj.points.size() == 6);
  CHECK(traj.points.back().fidelity >= 0.999);
  CHECK(traj.points[traj.points.size() - 2].fidelity < 0.999);
}

TEST_CASE("an aborting round ends the trajectory with partial points") {
  // The ebit start survives a pure-X channel round (it becomes psi+), but
  // every string is rejected one round later.
  const Trajectory traj = run_trajectory(BellDiagonalState({1, 0, 0, 0}),
                                         star_round(flip_channel(0.0)), 10);
  CHECK(traj.status == TrajectoryStatus::aborted);
  CHECK(traj.points.empty());
}

TEST_CASE("fixed point of the depolarizing 3/4 single-carrier round") {
  const FixedPointReport rep =
      channel_fixed_point(star_code(1), depolarizing_channel(0.75));
  CHECK(rep.f_star == doctest::Approx(0.863330289050).epsilon(1e-9));
  CHECK(rep.residual < 1e-11);
  CHECK(rep.start_deviation < 1e-9);
  // The report's state is genuinely fixed under one more round.
  RoundConfig cfg;
  cfg.channel = depolarizing_channel(0.75);
  const RoundOutcome next = caepp_round(rep.state, cfg);
  for (int i = 0; i < 4; ++i) {
    CHECK(next.state.coeffs()[i] ==
          doctest::Approx(rep.state.coeffs()[i]).epsilon(1e-10));
  }
}

TEST_CASE("flip channels purify to a perfect pair") {
  const FixedPointReport rep =
      channel_fixed_point(star_code(1), flip_channel(0.75));
  CHECK(std::abs(rep.f_star - 1.0) < 1e-9);
}

TEST_CASE("algebraic star fixed point matches direct iteration") {
  for (size_t m : {size_t(1), size_t(2), size_t(4), size_t(6)}) {
    for (double p00 : {0.55, 0.75, 0.9}) {
      const FixedPointReport alg = star_fixed_point(p00, m);
      const BellDiagonalState start =
          choi_state(depolarizing_channel(p00));
      const FixedPointReport iter = fixed_point(
          [p00, m](const BellDiagonalState& s) {
            return star_closed_form(s, p00, m);
          },
          start, 1e-13, 200000);
      CHECK(alg.f_star == doctest::Approx(iter.f_star).epsilon(1e-9));
      CHECK(alg.residual < 1e-11);
      REQUIRE(alg.bound.has_value());
      CHECK(1.0 - alg.f_star <= *alg.bound + 1e-12);
    }
  }
}

TEST_CASE("fixed-point coefficient ratios obey the tail bounds") {
  for (size_t m : {size_t(1), size_t(3), size_t(10), size_t(40)}) {
    for (double p00 : {0.53, 0.6, 0.75, 0.95}) {
      const FixedPointReport rep = star_fixed_point(p00, m);
      const AbcCoefficients k = abc_coefficients(p00, m);
      const auto& q = rep.state.coeffs();
      CHECK(q[1] + q[2] <= k.b / (2.0 * k.c) + 1e-12);
      CHECK(q[3] <= k.b / k.c + 1e-12);
      CHECK(1.0 - q[0] <= 1.5 * k.b / k.c + 1e-12);
    }
  }
}

TEST_CASE("perfect channel pins the fixed point at one") {
  const FixedPointReport rep = star_fixed_point(1.0, 5);
  CHECK(rep.f_star == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.bound.has_value());
  CHECK(*rep.bound == doctest::Approx(0.0));
}

TEST_CASE("fixed point iteration reports non-convergence") {
  RoundConfig cfg;
  cfg.channel = depolarizing_channel(0.75);
  bool thrown = false;
  try {
    fixed_point([cfg](const BellDiagonalState& s) { return caepp_round(s, cfg); },
                choi_state(cfg.channel), 1e-12, 3);
  } catch (const convergence_error& err) {
    thrown = true;
    CHECK(err.report().iterations == 3);
    CHECK(err.report().residual > 1e-12);
  }
  CHECK(thrown);
}

TEST_CASE("fixed point validates its tolerances") {
  const RoundFn id = [](const BellDiagonalState& s) {
    return RoundOutcome{1.0, s, s.coeff(0, 0)};
  };
  CHECK_THROWS_AS(fixed_point(id, BellDiagonalState({1, 0, 0, 0}), -1.0, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(fixed_point(id, BellDiagonalState({1, 0, 0, 0}), 1e-12, 0),
                  std::invalid_argument);
}

TEST_CASE("carrier-count sweep is monotone and bounded") {
  const std::vector<SweepPoint> sweep = sweep_m(0.6, 1, 12);
  REQUIRE(sweep.size() == 12);
  for (size_t i = 0; i < sweep.size(); ++i) {
    CHECK(sweep[i].m == i + 1);
    if (i > 0) CHECK(sweep[i].f_star >= sweep[i - 1].f_star - 1e-12);
    CHECK(1.0 - sweep[i].f_star <= sweep[i].bound + 1e-12);
  }
  CHECK_THROWS_AS(sweep_m(0.6, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(sweep_m(0.6, 0, 4), std::invalid_argument);
}

TEST_CASE("sweep handles large m without stalling") {
  const std::vector<SweepPoint> sweep = sweep_m(0.6, 39, 40);
  CHECK(sweep.size() == 2);
  CHECK(sweep[1].f_star > 0.999999);
  CHECK(sweep[1].f_star <= 1.0);
}
