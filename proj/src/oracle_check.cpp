#include "caepp/oracle_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>

#include "caepp/ghz.hpp"
#include "caepp/oracle.hpp"
#include "caepp/parallel.hpp"
#include "caepp/pauli.hpp"
#include "caepp/rounds.hpp"
#include "caepp/states.hpp"

namespace caepp {

namespace {

using PointFn = std::function<double()>;

std::vector<double> linspace(double lo, double hi, size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * double(i) / double(count - 1);
  }
  return out;
}

std::array<double, 4> random_simplex4(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::array<double, 4> q{};
  double total = 0.0;
  for (double& v : q) {
    v = u(rng);
    total += v;
  }
  for (double& v : q) v /= total;
  return q;
}

double outcome_deviation(const RoundOutcome& lhs, const RoundOutcome& rhs) {
  double dev = std::abs(lhs.p_succ - rhs.p_succ);
  for (int i = 0; i < 4; ++i) {
    dev = std::max(dev,
                   std::abs(lhs.state.coeffs()[i] - rhs.state.coeffs()[i]));
  }
  return std::max(dev, std::abs(lhs.fidelity - rhs.fidelity));
}

double ghz_outcome_deviation(const GhzRoundOutcome& lhs,
                             const GhzRoundOutcome& rhs) {
  double dev = std::abs(lhs.p_succ - rhs.p_succ);
  for (int i = 0; i < 8; ++i) {
    dev = std::max(dev,
                   std::abs(lhs.state.coeffs()[i] - rhs.state.coeffs()[i]));
  }
  return std::max(dev, std::abs(lhs.fidelity - rhs.fidelity));
}

// Both sides must either produce a round outcome or abort; a one-sided
// abort registers as an unmissable deviation of 1.
double compare_caepp(const BellDiagonalState& in, const StabilizerCode& code,
                     const PauliChannel& channel, bool pre_process,
                     double e = 0.0, double f = 0.0) {
  RoundConfig cfg;
  cfg.code = code;
  cfg.channel = channel;
  cfg.pre_process = pre_process;
  cfg.memory_error = e;
  cfg.measurement_flip = f;
  RoundOutcome eng, orc;
  bool eng_abort = false, orc_abort = false;
  try {
    eng = (e == 0.0 && f == 0.0) ? caepp_round(in, cfg) : noisy_round(in, cfg);
  } catch (const protocol_abort_error&) {
    eng_abort = true;
  }
  try {
    orc = dense_caepp_round(in, code, channel, pre_process, e, f);
  } catch (const protocol_abort_error&) {
    orc_abort = true;
  }
  if (eng_abort != orc_abort) return 1.0;
  return eng_abort ? 0.0 : outcome_deviation(eng, orc);
}

double compare_closed_single(const BellDiagonalState& in,
                             const PauliChannel& channel, bool pre_process) {
  return outcome_deviation(
      caepp_round_closed_single(in, channel, pre_process),
      dense_caepp_round(in, star_code(1), channel, pre_process));
}

double compare_twepp(const BellDiagonalState& a, const BellDiagonalState& b,
                     TweppVariant variant, double e = 0.0, double f = 0.0) {
  RoundOutcome eng, orc;
  bool eng_abort = false, orc_abort = false;
  try {
    eng = (e == 0.0 && f == 0.0) ? twepp_round(a, b, variant)
                                 : noisy_twepp_round(a, b, variant, e, f);
  } catch (const protocol_abort_error&) {
    eng_abort = true;
  }
  try {
    orc = dense_twepp_round(a, b, variant, e, f);
  } catch (const protocol_abort_error&) {
    orc_abort = true;
  }
  if (eng_abort != orc_abort) return 1.0;
  return eng_abort ? 0.0 : outcome_deviation(eng, orc);
}

double compare_ghz(const GHZDiagonalState& r, const PauliChannel& chb,
                   const PauliChannel& chc) {
  return ghz_outcome_deviation(ghz_round(r, ghz_init(chb, chc)),
                               dense_ghz_round(r, chb, chc));
}

OracleCheckCase run_case(std::string name, std::vector<PointFn> points) {
  std::vector<double> deviations(points.size(), 0.0);
  parallel_for(points.size(), [&](size_t i) { deviations[i] = points[i](); });
  OracleCheckCase result;
  result.name = std::move(name);
  result.points = points.size();
  result.max_deviation =
      deviations.empty()
          ? 0.0
          : *std::max_element(deviations.begin(), deviations.end());
  return result;
}

}  // namespace

std::vector<OracleCheckCase> run_oracle_checks(size_t grid_points) {
  if (grid_points < 1) {
    throw std::invalid_argument(
        "run_oracle_checks: grid_points must be >= 1");
  }
  // All randomness is drawn while the point list is built, from a fixed
  // seed, so the sweep is reproducible and independent of thread count.
  std::mt19937 rng(0xCAE99u);
  const std::array<BellDiagonalState, 3> inputs = {
      BellDiagonalState({1.0, 0.0, 0.0, 0.0}),
      BellDiagonalState({0.75, 1.0 / 12, 1.0 / 12, 1.0 / 12}),
      BellDiagonalState({0.6, 0.2, 0.15, 0.05}),
  };
  std::vector<OracleCheckCase> cases;

  {  // star codes, depolarizing family
    std::vector<PointFn> points;
    size_t idx = 0;
    for (size_t m = 1; m <= 3; ++m) {
      for (double p00 : linspace(0.3, 1.0, grid_points)) {
        const BellDiagonalState in = inputs[idx % inputs.size()];
        const bool pre = (idx % 2) == 0;
        ++idx;
        points.push_back([m, p00, in, pre] {
          return compare_caepp(in, star_code(m), depolarizing_channel(p00),
                               pre);
        });
      }
    }
    cases.push_back(run_case("caepp star depolarizing", std::move(points)));
  }

  {  // star codes, biased family
    std::vector<PointFn> points;
    size_t idx = 0;
    for (size_t m = 1; m <= 3; ++m) {
      for (double p00 : linspace(0.4, 1.0, grid_points)) {
        const BellDiagonalState in = inputs[idx % inputs.size()];
        const bool pre = (idx % 2) == 1;
        ++idx;
        points.push_back([m, p00, in, pre] {
          return compare_caepp(in, star_code(m), biased_channel(p00), pre);
        });
      }
    }
    cases.push_back(run_case("caepp star biased", std::move(points)));
  }

  {  // star codes, flip family (avoid the all-zero corner: strictly
     // positive inputs and p00 bounded away from 0)
    std::vector<PointFn> points;
    size_t idx = 0;
    for (size_t m = 1; m <= 3; ++m) {
      for (double p00 : linspace(0.05, 1.0, grid_points)) {
        const BellDiagonalState in = inputs[1 + idx % 2];
        const bool pre = (idx % 2) == 0;
        ++idx;
        points.push_back([m, p00, in, pre] {
          return compare_caepp(in, star_code(m), flip_channel(p00, 0.7, 0.3),
                               pre);
        });
      }
    }
    cases.push_back(run_case("caepp star flip", std::move(points)));
  }

  {  // star codes, random channels and states
    std::vector<PointFn> points;
    for (size_t i = 0; i < 3 * grid_points; ++i) {
      const size_t m = 1 + i % 3;
      const BellDiagonalState in{random_simplex4(rng)};
      const PauliChannel channel{random_simplex4(rng)};
      const bool pre = (i % 2) == 0;
      points.push_back([m, in, channel, pre] {
        return compare_caepp(in, star_code(m), channel, pre);
      });
    }
    cases.push_back(run_case("caepp star custom", std::move(points)));
  }

  {  // pairwise codes (block count 2 fills all six dense qubits)
    std::vector<PointFn> points;
    size_t idx = 0;
    for (size_t blocks = 1; blocks <= 2; ++blocks) {
      for (double p00 : linspace(0.5, 0.95, std::min<size_t>(grid_points, 6))) {
        const BellDiagonalState in = inputs[idx % inputs.size()];
        const bool pre = (idx % 2) == 0;
        ++idx;
        points.push_back([blocks, p00, in, pre] {
          return compare_caepp(in, pairwise_code(blocks),
                               depolarizing_channel(p00), pre);
        });
      }
      const BellDiagonalState in{random_simplex4(rng)};
      const PauliChannel channel{random_simplex4(rng)};
      points.push_back([blocks, in, channel] {
        return compare_caepp(in, pairwise_code(blocks), channel, true);
      });
    }
    cases.push_back(run_case("caepp pairwise", std::move(points)));
  }

  {  // single-carrier closed form against the dense circuit
    std::vector<PointFn> points;
    for (size_t i = 0; i < grid_points; ++i) {
      const BellDiagonalState in{random_simplex4(rng)};
      const PauliChannel channel{random_simplex4(rng)};
      const bool pre = (i % 2) == 0;
      points.push_back(
          [in, channel, pre] { return compare_closed_single(in, channel, pre); });
    }
    cases.push_back(run_case("caepp single closed form", std::move(points)));
  }

  {  // two-way variants
    std::vector<PointFn> points;
    for (TweppVariant variant : {TweppVariant::none, TweppVariant::bbpssw,
                                 TweppVariant::dejmps}) {
      for (size_t i = 0; i < grid_points; ++i) {
        const BellDiagonalState a{random_simplex4(rng)};
        const BellDiagonalState b{random_simplex4(rng)};
        points.push_back(
            [a, b, variant] { return compare_twepp(a, b, variant); });
      }
    }
    cases.push_back(run_case("twepp", std::move(points)));
  }

  const std::array<double, 3> e_grid = {0.0, 0.05, 0.2};
  const std::array<double, 3> f_grid = {0.0, 0.02, 0.1};

  {  // carrier rounds with memory and measurement errors
    std::vector<PointFn> points;
    size_t idx = 0;
    for (size_t m = 1; m <= 2; ++m) {
      for (double e : e_grid) {
        for (double f : f_grid) {
          const BellDiagonalState in = inputs[1 + idx % 2];
          const PauliChannel channel = (idx % 2) == 0
                                           ? depolarizing_channel(0.85)
                                           : PauliChannel{random_simplex4(rng)};
          const bool pre = (idx % 2) == 0;
          ++idx;
          points.push_back([m, in, channel, pre, e, f] {
            return compare_caepp(in, star_code(m), channel, pre, e, f);
          });
        }
      }
    }
    cases.push_back(run_case("caepp noisy", std::move(points)));
  }

  {  // two-way rounds with memory and measurement errors
    std::vector<PointFn> points;
    for (TweppVariant variant : {TweppVariant::none, TweppVariant::bbpssw,
                                 TweppVariant::dejmps}) {
      for (double e : e_grid) {
        for (double f : f_grid) {
          const BellDiagonalState a{random_simplex4(rng)};
          const BellDiagonalState b{random_simplex4(rng)};
          points.push_back([a, b, variant, e, f] {
            return compare_twepp(a, b, variant, e, f);
          });
        }
      }
    }
    cases.push_back(run_case("twepp noisy", std::move(points)));
  }

  {  // tripartite rounds
    const std::array<GHZDiagonalState, 3> shared = {
        GHZDiagonalState({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}),
        ghz_init(depolarizing_channel(0.85), depolarizing_channel(0.9)),
        ghz_init(biased_channel(0.8), flip_channel(0.9, 0.6, 0.4)),
    };
    const std::vector<double> grid = linspace(0.55, 1.0, grid_points);
    std::vector<PointFn> points;
    for (size_t i = 0; i < grid_points; ++i) {
      const GHZDiagonalState r = shared[i % shared.size()];
      PauliChannel chb = depolarizing_channel(grid[i]);
      PauliChannel chc = depolarizing_channel(grid[grid_points - 1 - i]);
      if (i % 3 == 1) chb = biased_channel(grid[i]);
      if (i % 3 == 2) chc = flip_channel(grid[i], 0.5, 0.5);
      points.push_back([r, chb, chc] { return compare_ghz(r, chb, chc); });
    }
    cases.push_back(run_case("ghz", std::move(points)));
  }

  return cases;
}

double worst_deviation(const std::vector<OracleCheckCase>& cases) {
  double worst = 0.0;
  for (const OracleCheckCase& c : cases) {
    worst = std::max(worst, c.max_deviation);
  }
  return worst;
}

}  // namespace caepp
