#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>

#include "caepp/oracle.hpp"
#include "caepp/oracle_check.hpp"
#include "caepp/parallel.hpp"
#include "doctest.h"

using namespace caepp;

namespace {

DenseState phi_plus() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return DenseState(2, psi);
}

}  // namespace

TEST_CASE("dense state constructors validate their inputs") {
  CHECK_THROWS_AS(DenseState(0), std::invalid_argument);
  CHECK_THROWS_AS(DenseState(7), std::invalid_argument);
  const Eigen::VectorXcd short_vec = Eigen::VectorXcd::Zero(3);
  CHECK_THROWS_AS(DenseState(2, short_vec), std::invalid_argument);
  const Eigen::MatrixXcd wide_mat = Eigen::MatrixXcd::Zero(4, 4);
  CHECK_THROWS_AS(DenseState(1, wide_mat), std::invalid_argument);

  const DenseState ground(2);
  CHECK(ground.dim() == 4);
  CHECK(ground.density()(0, 0) == std::complex<double>(1.0, 0.0));
  ground.validate();
}

TEST_CASE("validate rejects unphysical densities") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = 2.0;  // trace 2
  CHECK_THROWS_AS(DenseState(1, bad).validate(), std::logic_error);

  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;  // negative eigenvalue
  CHECK_THROWS_AS(DenseState(1, neg).validate(), std::logic_error);
}

TEST_CASE("gates are involutions where expected") {
  DenseState st = phi_plus();
  const Eigen::MatrixXcd before = st.density();
  st.apply_h(0);
  st.apply_h(0);
  CHECK((st.density() - before).cwiseAbs().maxCoeff() < 1e-14);
  st.apply_cnot(0, 1);
  st.apply_cnot(0, 1);
  CHECK((st.density() - before).cwiseAbs().maxCoeff() < 1e-14);
  st.apply_rx(1, std::numbers::pi / 2);
  st.apply_rx(1, -std::numbers::pi / 2);
  CHECK((st.density() - before).cwiseAbs().maxCoeff() < 1e-14);
  st.validate();

  CHECK_THROWS_AS(st.apply_cnot(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(st.apply_h(2), std::out_of_range);
}

TEST_CASE("postselection splits phi+ evenly") {
  const Postselection even = measure_z_postselect(phi_plus(), {1}, 0);
  CHECK(even.probability == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(even.state.num_qubits() == 1);
  CHECK(even.state.density()(0, 0).real() == doctest::Approx(1.0));

  const Postselection odd = measure_z_postselect(phi_plus(), {1}, 1);
  CHECK(odd.state.density()(1, 1).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(measure_z_postselect(DenseState(2), {0}, 1),
                  protocol_abort_error);
  CHECK_THROWS_AS(measure_z_postselect(phi_plus(), {0, 0}, 0),
                  std::invalid_argument);
}

TEST_CASE("Bell coefficients round-trip a coefficient preparation") {
  const BellDiagonalState q({0.6, 0.2, 0.15, 0.05});
  DenseState st = phi_plus();
  st.apply_pauli_channel(as_channel(q), 1);
  const BellDiagonalState out = bell_coefficients(st);
  for (int i = 0; i < 4; ++i) {
    CHECK(out.coeffs()[i] == doctest::Approx(q.coeffs()[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(bell_coefficients(DenseState(3)), std::invalid_argument);
}

TEST_CASE("GHZ coefficients recognize each basis state") {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
        const double s = 1.0 / std::sqrt(2.0);
        v((a << 1) | b) = s;
        v(4 | ((1 - a) << 1) | (1 - b)) = c ? -s : s;
        const GHZDiagonalState out = ghz_coefficients(DenseState(3, v));
        for (int i = 0; i < 8; ++i) {
          const double expected = i == ((a << 2) | (b << 1) | c) ? 1.0 : 0.0;
          CHECK(out.coeffs()[i] == doctest::Approx(expected).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("pre-processing rotations match the coefficient swaps") {
  // Rx(+pi/2) on Alice with Rx(-pi/2) on Bob realizes the phi-/psi- swap.
  const BellDiagonalState q({0.55, 0.25, 0.12, 0.08});
  DenseState st = phi_plus();
  st.apply_pauli_channel(as_channel(q), 1);
  st.apply_rx(0, std::numbers::pi / 2);
  st.apply_rx(1, -std::numbers::pi / 2);
  const BellDiagonalState rotated = bell_coefficients(st);
  const BellDiagonalState swapped = preprocess_swap(q);
  for (int i = 0; i < 4; ++i) {
    CHECK(rotated.coeffs()[i] ==
          doctest::Approx(swapped.coeffs()[i]).epsilon(1e-14));
  }
}

TEST_CASE("dense single-carrier round agrees with the closed kernel") {
  const BellDiagonalState q({0.7, 0.15, 0.1, 0.05});
  const PauliChannel ch({0.8, 0.1, 0.06, 0.04});
  for (bool pre : {false, true}) {
    const RoundOutcome dense = dense_caepp_round(q, star_code(1), ch, pre);
    const RoundOutcome closed = caepp_round_closed_single(q, ch, pre);
    CHECK(dense.p_succ == doctest::Approx(closed.p_succ).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) {
      CHECK(dense.state.coeffs()[i] ==
            doctest::Approx(closed.state.coeffs()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense rounds enforce the qubit budget") {
  CHECK_THROWS_AS(dense_caepp_round(BellDiagonalState({1, 0, 0, 0}),
                                    star_code(5), depolarizing_channel(0.9),
                                    true),
                  std::invalid_argument);
}

TEST_CASE("cross-validation sweep stays at machine precision") {
  const std::vector<OracleCheckCase> cases = run_oracle_checks(4);
  CHECK(cases.size() == 10);
  for (const OracleCheckCase& c : cases) {
    CAPTURE(c.name);
    CHECK(c.points > 0);
    CHECK(c.max_deviation < 1e-12);
  }
  CHECK(worst_deviation(cases) < 1e-12);
}

TEST_CASE("sweep results are independent of the worker count") {
  setenv("CAEPP_WORKERS", "1", 1);
  CHECK(worker_count() == 1);
  const std::vector<OracleCheckCase> serial = run_oracle_checks(3);
  setenv("CAEPP_WORKERS", "4", 1);
  CHECK(worker_count() == 4);
  const std::vector<OracleCheckCase> parallel = run_oracle_checks(3);
  unsetenv("CAEPP_WORKERS");
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].name == parallel[i].name);
    CHECK(serial[i].points == parallel[i].points);
    CHECK(serial[i].max_deviation == parallel[i].max_deviation);
  }
}

TEST_CASE("parallel_for propagates the first worker exception") {
  setenv("CAEPP_WORKERS", "4", 1);
  CHECK_THROWS_AS(
      parallel_for(64,
                   [](size_t i) {
                     if (i == 13) throw std::runtime_error("boom");
                   }),
      std::runtime_error);
  unsetenv("CAEPP_WORKERS");
}
