#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "caepp/rounds.hpp"
#include "caepp/states.hpp"

// Multi-round drivers: success-conditioned trajectories, fixed points of
// the round map, and carrier-count sweeps.

namespace caepp {

using RoundFn = std::function<RoundOutcome(const BellDiagonalState&)>;

enum class TrajectoryStatus { converged, target_reached, aborted };

struct TrajectoryPoint {
  int round = 0;  // 1-based
  double fidelity = 0.0;
  double p_succ = 0.0;
  double cumulative_success = 0.0;  // product of p_succ so far
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  TrajectoryStatus status = TrajectoryStatus::converged;
  BellDiagonalState final_state{{1.0, 0.0, 0.0, 0.0}};
};

// Runs up to n_rounds success-conditioned rounds from state0.  Stops early
// once the fidelity reaches target_f (status target_reached) or when a
// round aborts (status aborted, points hold the completed rounds); running
// the full budget yields status converged.
Trajectory run_trajectory(const BellDiagonalState& state0,
                          const RoundFn& round_fn, int n_rounds,
                          std::optional<double> target_f = std::nullopt);

struct FixedPointReport {
  double f_star = 0.0;
  BellDiagonalState state{{1.0, 0.0, 0.0, 0.0}};  // q* at convergence
  size_t iterations = 0;
  double residual = 0.0;  // max-norm coefficient change at the last step
  // 3B/(2C): the tail bound on 1 - q*00 for star codes over the
  // depolarizing family (unset when it does not apply).
  std::optional<double> bound = std::nullopt;
  // |F* - F*'| between the requested start and the ebit start (1,0,0,0);
  // nonzero values flag a start-sensitive (degenerate) round map.
  double start_deviation = 0.0;
};

// Thrown when the fixed-point iteration exhausts max_iter; carries the
// state of the search at the point of failure.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& message, FixedPointReport report)
      : std::runtime_error(message), report_(std::move(report)) {}
  const FixedPointReport& report() const { return report_; }

 private:
  FixedPointReport report_;
};

// Iterates round_fn from state0 until the max-norm coefficient change
// drops below tol; throws convergence_error after max_iter steps.
FixedPointReport fixed_point(const RoundFn& round_fn,
                             const BellDiagonalState& state0,
                             double tol = 1e-12, size_t max_iter = 100000);

// Fixed point of the enumeration round for an arbitrary code/channel,
// started from the channel's CJ state (the shared state the parties hold
// before the first round).  Also iterates from the ebit start and records
// the fidelity gap in start_deviation.
FixedPointReport channel_fixed_point(const StabilizerCode& code,
                                     const PauliChannel& channel,
                                     bool pre_process = true,
                                     double tol = 1e-12,
                                     size_t max_iter = 100000);

// Fixed point of the m-carrier star-code round over the depolarizing
// family.  For p00 > 1/4 the Perron eigenvector of the update map is
// solved algebraically (direct iteration stalls for large m, where the
// spectral gap closes like (2 alpha/(1+alpha))^m); degenerate parameters
// fall back to direct iteration of star_closed_form.
FixedPointReport star_fixed_point(double p00, size_t m, double tol = 1e-12);

struct SweepPoint {
  size_t m = 0;
  double f_star = 0.0;
  double bound = 0.0;  // 3B/(2C); NaN when C <= 0
};

// F* per carrier count in [m_min, m_max].  Small-m points are cross-checked
// against the enumeration engine's fixed point.
std::vector<SweepPoint> sweep_m(double p00, size_t m_min, size_t m_max);

}  // namespace caepp
