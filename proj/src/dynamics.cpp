#include "caepp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace caepp {

namespace {

double max_norm_diff(const std::array<double, 4>& a,
                     const std::array<double, 4>& b) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

Trajectory run_trajectory(const BellDiagonalState& state0,
                          const RoundFn& round_fn, int n_rounds,
                          std::optional<double> target_f) {
  if (n_rounds < 1) {
    throw std::invalid_argument("run_trajectory: n_rounds must be >= 1");
  }
  Trajectory traj;
  traj.final_state = state0;
  BellDiagonalState s = state0;
  double cumulative = 1.0;
  for (int round = 1; round <= n_rounds; ++round) {
    RoundOutcome out;
    try {
      out = round_fn(s);
    } catch (const protocol_abort_error&) {
      traj.status = TrajectoryStatus::aborted;
      return traj;
    }
    cumulative *= out.p_succ;
    s = out.state;
    traj.points.push_back({round, out.fidelity, out.p_succ, cumulative});
    traj.final_state = s;
    if (target_f && out.fidelity >= *target_f) {
      traj.status = TrajectoryStatus::target_reached;
      return traj;
    }
  }
  traj.status = TrajectoryStatus::converged;
  return traj;
}

FixedPointReport fixed_point(const RoundFn& round_fn,
                             const BellDiagonalState& state0, double tol,
                             size_t max_iter) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("fixed_point: tol must be positive");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("fixed_point: max_iter must be >= 1");
  }
  BellDiagonalState s = state0;
  double change = std::numeric_limits<double>::infinity();
  for (size_t it = 1; it <= max_iter; ++it) {
    const RoundOutcome out = round_fn(s);
    change = max_norm_diff(out.state.coeffs(), s.coeffs());
    s = out.state;
    if (change < tol) {
      return {out.fidelity, s, it, change, std::nullopt, 0.0};
    }
  }
  FixedPointReport last{fidelity(s), s, max_iter, change, std::nullopt, 0.0};
  throw convergence_error(
      "fixed_point: no convergence within the iteration budget",
      std::move(last));
}

FixedPointReport channel_fixed_point(const StabilizerCode& code,
                                     const PauliChannel& channel,
                                     bool pre_process, double tol,
                                     size_t max_iter) {
  RoundConfig cfg;
  cfg.code = code;
  cfg.channel = channel;
  cfg.pre_process = pre_process;
  const RoundFn fn = [&cfg](const BellDiagonalState& s) {
    return caepp_round(s, cfg);
  };
  FixedPointReport report =
      fixed_point(fn, choi_state(channel), tol, max_iter);
  try {
    const FixedPointReport ebit = fixed_point(
        fn, BellDiagonalState({1.0, 0.0, 0.0, 0.0}), tol, max_iter);
    report.start_deviation = std::abs(report.f_star - ebit.f_star);
  } catch (const std::exception&) {
    // The ebit start aborted or stalled; flag rather than fail the run.
    report.start_deviation = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

FixedPointReport star_fixed_point(double p00, size_t m, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("star_fixed_point: tol must be positive");
  }
  const AbcCoefficients k = abc_coefficients(p00, m);

  if (k.b == 0.0) {  // noiseless channel: the ebit is already fixed
    BellDiagonalState q({1.0, 0.0, 0.0, 0.0});
    const RoundOutcome check = star_closed_form(q, p00, m);
    return {1.0,
            q,
            0,
            max_norm_diff(check.state.coeffs(), q.coeffs()),
            0.0,
            0.0};
  }

  const double b = k.b / (k.a + k.c);
  const double delta = 2.0 * k.c / (k.a + k.c);
  const double g = 1.0 - delta;  // = (A - C)/(A + C)

  // Eliminating the ratios v = q01/q00 and w = q10/q00 from the eigenvalue
  // equations leaves a quartic in u = q11/q00:
  //   h(u) = u (1 + bu)^2 (bu + delta) - (b + u) (g (bu + delta) + b^2).
  // For alpha > 0, h(0) < 0 < h(1) and the root in (0, 1) is the unique
  // one whose eigenvector is positive (Perron), so bisection is safe.
  const auto h = [b, delta, g](double u) {
    const double t = b * u + delta;
    const double s = 1.0 + b * u;
    return u * s * s * t - (b + u) * (g * t + b * b);
  };

  if (k.alpha <= 0.0 || !(h(1.0) > 0.0)) {
    // Entanglement-breaking corner (or underflowed moments): the map is
    // strongly contracting there, so direct iteration is cheap.
    const RoundFn fn = [p00, m](const BellDiagonalState& s) {
      return star_closed_form(s, p00, m);
    };
    FixedPointReport report =
        fixed_point(fn, choi_state(depolarizing_channel(p00)), tol, 100000);
    try {
      const FixedPointReport ebit = fixed_point(
          fn, BellDiagonalState({1.0, 0.0, 0.0, 0.0}), tol, 100000);
      report.start_deviation = std::abs(report.f_star - ebit.f_star);
    } catch (const std::exception&) {
      report.start_deviation = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
  }

  double lo = 0.0;
  double hi = 1.0;
  size_t iterations = 0;
  for (; iterations < 200; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);
  const double v = (b + u) / (1.0 + b * u);
  const double w = b * v / (b * u + delta);
  const double q00 = 1.0 / (1.0 + u + v + w);
  BellDiagonalState q({q00, v * q00, w * q00, u * q00});

  const RoundOutcome check = star_closed_form(q, p00, m);
  return {q.coeff(0, 0),
          q,
          iterations,
          max_norm_diff(check.state.coeffs(), q.coeffs()),
          1.5 * k.b / k.c,
          0.0};
}

std::vector<SweepPoint> sweep_m(double p00, size_t m_min, size_t m_max) {
  if (m_min < 1 || m_min > m_max) {
    throw std::invalid_argument("sweep_m: need 1 <= m_min <= m_max");
  }
  std::vector<SweepPoint> points;
  points.reserve(m_max - m_min + 1);
  for (size_t m = m_min; m <= m_max; ++m) {
    const FixedPointReport report = star_fixed_point(p00, m);
    if (m <= 4) {
      // The closed form must land on the enumeration engine's fixed point.
      const FixedPointReport enumerated =
          channel_fixed_point(star_code(m), depolarizing_channel(p00));
      if (std::abs(enumerated.f_star - report.f_star) > 1e-10) {
        throw std::logic_error(
            "sweep_m: closed-form and enumeration fixed points disagree");
      }
    }
    const double bound = report.bound
                             ? *report.bound
                             : std::numeric_limits<double>::quiet_NaN();
    points.push_back({m, report.f_star, bound});
  }
  return points;
}

}  // namespace caepp
