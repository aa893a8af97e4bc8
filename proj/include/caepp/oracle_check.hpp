#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Cross-validation sweep: every fast round engine is replayed by its dense
// density-matrix twin over deterministic parameter grids, and the worst
// disagreement (over success probability, output coefficients, and
// fidelity) is recorded per case.

namespace caepp {

struct OracleCheckCase {
  std::string name;
  size_t points = 0;           // parameter combinations exercised
  double max_deviation = 0.0;  // worst |engine - oracle| over all outputs
};

// grid_points sets the per-case parameter resolution (points per sweep
// axis); random channels and states come from a fixed seed, so the whole
// sweep is deterministic.  Work is spread over worker_count() threads.
std::vector<OracleCheckCase> run_oracle_checks(size_t grid_points = 20);

double worst_deviation(const std::vector<OracleCheckCase>& cases);

}  // namespace caepp
