#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "caepp/dynamics.hpp"
#include "caepp/ghz.hpp"
#include "caepp/oracle_check.hpp"
#include "caepp/pauli.hpp"
#include "caepp/rounds.hpp"
#include "caepp/states.hpp"

// Command-line frontend.  Every run is deterministic: identical flags give
// byte-identical output (12 significant digits, locale-independent).  Exit
// codes: 0 success, 2 usage error, 3 abort/convergence failure.

namespace {

using namespace caepp;

// ---------------------------------------------------------------- output

std::string format_number(double v, bool json) {
  if (std::isnan(v)) return json ? "null" : "nan";
  if (std::isinf(v)) return json ? "null" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

struct Cell {
  enum class Kind { integer, number } kind;
  long long i = 0;
  double d = 0.0;
};

Cell cell(long long value) { return {Cell::Kind::integer, value, 0.0}; }
Cell cell(double value) { return {Cell::Kind::number, 0, value}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c, bool json) {
  return c.kind == Cell::Kind::integer ? std::to_string(c.i)
                                       : format_number(c.d, json);
}

void emit(const Table& t, const std::string& format) {
  std::string out;
  if (format == "json") {
    if (t.rows.empty()) {
      out = "[]\n";
    } else {
      out = "[";
      for (size_t r = 0; r < t.rows.size(); ++r) {
        out += r == 0 ? "\n {" : ",\n {";
        for (size_t c = 0; c < t.columns.size(); ++c) {
          if (c) out += ", ";
          out += "\"" + t.columns[c] + "\": " + cell_text(t.rows[r][c], true);
        }
        out += "}";
      }
      out += "\n]\n";
    }
  } else {
    for (size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ",";
      out += t.columns[c];
    }
    out += "\n";
    for (const auto& row : t.rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) out += ",";
        out += cell_text(row[c], false);
      }
      out += "\n";
    }
  }
  std::fwrite(out.data(), 1, out.size(), stdout);
}

// ---------------------------------------------------------------- parsing

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("invalid number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  size_t begin = 0;
  while (true) {
    const size_t end = text.find(sep, begin);
    parts.emplace_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) return parts;
    begin = end + 1;
  }
}

std::array<double, 4> parse_four(std::string_view text, const char* what) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 4) {
    throw std::invalid_argument(std::string(what) +
                                " needs four comma-separated values");
  }
  std::array<double, 4> out{};
  for (size_t i = 0; i < 4; ++i) out[i] = parse_double(parts[i]);
  return out;
}

// Self-contained channel spec: depolarizing:P | biased:P | flip:P[:G,D] |
// custom:a,b,c,d.
PauliChannel parse_channel_spec(const std::string& text) {
  const size_t colon = text.find(':');
  const std::string family = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (family == "custom") return PauliChannel(parse_four(rest, "custom"));
  if (family == "depolarizing") return depolarizing_channel(parse_double(rest));
  if (family == "biased") return biased_channel(parse_double(rest));
  if (family == "flip") {
    const std::vector<std::string> parts = split(rest, ':');
    if (parts.size() == 1) return flip_channel(parse_double(parts[0]));
    if (parts.size() == 2) {
      const std::vector<std::string> gd = split(parts[1], ',');
      if (gd.size() != 2) {
        throw std::invalid_argument("flip spec needs gamma,delta after ':'");
      }
      return flip_channel(parse_double(parts[0]), parse_double(gd[0]),
                          parse_double(gd[1]));
    }
  }
  throw std::invalid_argument("unknown channel spec: '" + text + "'");
}

struct CommonOpts {
  std::string channel = "depolarizing";
  double p00 = 0.75;
  double gamma = 1.0;
  double delta = 0.0;
  size_t m = 1;
  std::string code = "star";
  int rounds = 1;
  std::optional<double> target_f;
  bool no_preprocess = false;
  double e = 0.0;
  double f = 0.0;
  std::string protocol = "caepp";
  std::string variant = "none";
  std::string format = "csv";
};

PauliChannel channel_from_opts(const CommonOpts& o) {
  if (o.channel.rfind("custom:", 0) == 0) {
    return PauliChannel(parse_four(o.channel.substr(7), "custom channel"));
  }
  if (o.channel == "depolarizing") return depolarizing_channel(o.p00);
  if (o.channel == "biased") return biased_channel(o.p00);
  if (o.channel == "flip") return flip_channel(o.p00, o.gamma, o.delta);
  throw std::invalid_argument("unknown channel family: '" + o.channel + "'");
}

StabilizerCode code_from_opts(const CommonOpts& o) {
  if (o.code == "star" || o.code == "single") return star_code(o.m);
  if (o.code == "three") return three_carrier_code();
  if (o.code == "pairwise") {
    if (o.m % 2 != 0) {
      throw std::invalid_argument(
          "pairwise code needs an even carrier count --m");
    }
    return pairwise_code(o.m / 2);
  }
  if (o.code.rfind("custom:", 0) == 0) {
    std::vector<PauliString> generators;
    size_t width = 0;
    for (const std::string& part : split(o.code.substr(7), ',')) {
      const PauliString g = PauliString::parse(part);
      width = std::max(width, g.num_qubits());
      generators.push_back(g);
    }
    for (PauliString& g : generators) {
      g = PauliString(width, g.x_bits(), g.z_bits());
    }
    return custom_code(std::move(generators));
  }
  throw std::invalid_argument("unknown code: '" + o.code + "'");
}

TweppVariant variant_from_name(const std::string& name) {
  if (name == "none") return TweppVariant::none;
  if (name == "bbpssw") return TweppVariant::bbpssw;
  return TweppVariant::dejmps;
}

std::vector<double> parse_range(const std::string& text, const char* what) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3) {
    throw std::invalid_argument(std::string(what) +
                                " needs start,stop,count");
  }
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const long long count = std::llround(parse_double(parts[2]));
  if (count < 1) {
    throw std::invalid_argument(std::string(what) + ": count must be >= 1");
  }
  std::vector<double> out(count);
  for (long long i = 0; i < count; ++i) {
    out[i] = count == 1 ? start
                        : start + (stop - start) * double(i) / double(count - 1);
  }
  return out;
}

void warn_if_eb(const PauliChannel& channel, const char* label) {
  if (is_entanglement_breaking(channel)) {
    std::fprintf(stderr,
                 "warning: %s channel is entanglement breaking (no Pauli "
                 "weight exceeds 1/2); no purification scheme can help\n",
                 label);
  }
}

// ---------------------------------------------------------------- rounds

RoundFn make_round_fn(const CommonOpts& o, const PauliChannel& channel,
                      const StabilizerCode& code) {
  if (o.protocol == "twepp") {
    const TweppVariant variant = variant_from_name(o.variant);
    const double e = o.e, f = o.f;
    if (e == 0.0 && f == 0.0) {
      return [variant](const BellDiagonalState& s) {
        return twepp_round(s, s, variant);
      };
    }
    return [variant, e, f](const BellDiagonalState& s) {
      return noisy_twepp_round(s, s, variant, e, f);
    };
  }
  RoundConfig cfg;
  cfg.code = code;
  cfg.channel = channel;
  cfg.pre_process = !o.no_preprocess;
  cfg.memory_error = o.e;
  cfg.measurement_flip = o.f;
  if (o.e == 0.0 && o.f == 0.0) {
    if (code.num_carriers() > kMaxEnumerationCarriers) {
      const bool star_shaped = code.family == CodeFamily::star ||
                               code.family == CodeFamily::single;
      if (star_shaped && o.channel == "depolarizing" && cfg.pre_process) {
        const double p00 = o.p00;
        const size_t m = code.num_carriers();
        return [p00, m](const BellDiagonalState& s) {
          return star_closed_form(s, p00, m);
        };
      }
      throw std::invalid_argument(
          "more than 10 carriers needs the star code over the depolarizing "
          "family with pre-processing (closed form)");
    }
    return [cfg](const BellDiagonalState& s) { return caepp_round(s, cfg); };
  }
  return [cfg](const BellDiagonalState& s) { return noisy_round(s, cfg); };
}

// --------------------------------------------------------------- commands

int cmd_trajectory(const CommonOpts& o) {
  const PauliChannel channel = channel_from_opts(o);
  warn_if_eb(channel, "transmission");
  const StabilizerCode code = code_from_opts(o);
  const RoundFn round_fn = make_round_fn(o, channel, code);
  const Trajectory traj =
      run_trajectory(choi_state(channel), round_fn, o.rounds, o.target_f);
  Table t;
  t.columns = {"round", "fidelity", "p_succ", "cum_succ"};
  for (const TrajectoryPoint& p : traj.points) {
    t.rows.push_back({cell(static_cast<long long>(p.round)), cell(p.fidelity),
                      cell(p.p_succ), cell(p.cumulative_success)});
  }
  emit(t, o.format);
  if (traj.status == TrajectoryStatus::aborted) {
    std::fprintf(stderr, "error: round aborted (success probability zero)\n");
    return 3;
  }
  return 0;
}

int cmd_fixed_point(const CommonOpts& o, double tol, size_t max_iter) {
  const PauliChannel channel = channel_from_opts(o);
  warn_if_eb(channel, "transmission");
  const StabilizerCode code = code_from_opts(o);
  FixedPointReport report;
  int exit_code = 0;
  try {
    const bool star_shaped = code.family == CodeFamily::star ||
                             code.family == CodeFamily::single ||
                             code.family == CodeFamily::three_carrier;
    if (o.protocol == "caepp" && star_shaped && !o.no_preprocess &&
        o.e == 0.0 && o.f == 0.0 && o.channel == "depolarizing") {
      report = star_fixed_point(o.p00, code.num_carriers(), tol);
    } else if (o.protocol == "caepp" && o.e == 0.0 && o.f == 0.0) {
      report =
          channel_fixed_point(code, channel, !o.no_preprocess, tol, max_iter);
    } else {
      const RoundFn round_fn = make_round_fn(o, channel, code);
      report = fixed_point(round_fn, choi_state(channel), tol, max_iter);
    }
  } catch (const convergence_error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    report = err.report();
    exit_code = 3;
  }
  Table t;
  t.columns = {"F_star", "iterations", "residual", "bound"};
  t.rows.push_back({cell(report.f_star),
                    cell(static_cast<long long>(report.iterations)),
                    cell(report.residual),
                    cell(report.bound ? *report.bound : NAN)});
  emit(t, o.format);
  return exit_code;
}

int cmd_sweep_m(const std::vector<double>& p00_list, size_t m_min,
                size_t m_max, const std::string& format) {
  Table t;
  t.columns = {"p00", "m", "F_star", "bound_3B_2C"};
  for (double p00 : p00_list) {
    warn_if_eb(depolarizing_channel(p00), "transmission");
    for (const SweepPoint& pt : sweep_m(p00, m_min, m_max)) {
      t.rows.push_back({cell(p00), cell(static_cast<long long>(pt.m)),
                        cell(pt.f_star), cell(pt.bound)});
    }
  }
  emit(t, format);
  return 0;
}

int cmd_noise_compare(const std::vector<double>& f_in_list,
                      const std::string& e_range, const std::string& f_range,
                      const std::string& variant_name,
                      const std::string& format) {
  const TweppVariant variant = variant_from_name(variant_name);
  const std::vector<double> e_grid = parse_range(e_range, "--e-range");
  const std::vector<double> f_grid = parse_range(f_range, "--f-range");
  Table t;
  t.columns = {"f_in",     "e",        "f",           "caepp_F1",
               "twepp_F1", "caepp_psucc", "twepp_psucc"};
  const auto add_row = [&](double f_in, double e, double f) {
    const double r3 = (1.0 - f_in) / 3.0;
    const BellDiagonalState in({f_in, r3, r3, r3});
    RoundConfig cfg;
    cfg.channel = as_channel(in);
    cfg.pre_process = false;  // matches the two-way update rule exactly
    cfg.memory_error = e;
    cfg.measurement_flip = f;
    const RoundOutcome ca =
        (e == 0.0 && f == 0.0) ? caepp_round(in, cfg) : noisy_round(in, cfg);
    const RoundOutcome tw = (e == 0.0 && f == 0.0)
                                ? twepp_round(in, in, variant)
                                : noisy_twepp_round(in, in, variant, e, f);
    t.rows.push_back({cell(f_in), cell(e), cell(f), cell(ca.fidelity),
                      cell(tw.fidelity), cell(ca.p_succ), cell(tw.p_succ)});
  };
  for (double f_in : f_in_list) {
    for (double e : e_grid) add_row(f_in, e, 0.0);
    for (double f : f_grid) add_row(f_in, 0.0, f);
  }
  emit(t, format);
  return 0;
}

int cmd_ghz(const std::string& ab_spec, const std::string& ac_spec,
            int rounds, const std::string& format) {
  const PauliChannel ab = parse_channel_spec(ab_spec);
  const PauliChannel ac = parse_channel_spec(ac_spec);
  warn_if_eb(ab, "Alice-Bob");
  warn_if_eb(ac, "Alice-Carol");
  const GHZDiagonalState s = ghz_init(ab, ac);
  GHZDiagonalState r = s;
  Table t;
  t.columns = {"round", "p_succ", "F_before", "F_after"};
  for (int round = 1; round <= rounds; ++round) {
    const double f_before = r.coeff(0, 0, 0);
    try {
      const GhzRoundOutcome out = ghz_round(r, s);
      t.rows.push_back({cell(static_cast<long long>(round)), cell(out.p_succ),
                        cell(f_before), cell(out.fidelity)});
      r = out.state;
    } catch (const protocol_abort_error&) {
      t.rows.push_back({cell(static_cast<long long>(round)), cell(0.0),
                        cell(f_before), cell(NAN)});
      break;
    }
  }
  emit(t, format);
  return 0;
}

int cmd_oracle_check(size_t grid) {
  const std::vector<OracleCheckCase> cases = run_oracle_checks(grid);
  constexpr double kTol = 1e-10;
  bool all_pass = true;
  std::string out;
  for (const OracleCheckCase& c : cases) {
    const bool pass = c.max_deviation <= kTol;
    all_pass = all_pass && pass;
    out += c.name;
    out.resize(out.size() + (c.name.size() < 28 ? 28 - c.name.size() : 1),
               ' ');
    out += "points=" + std::to_string(c.points) +
           " max_deviation=" + format_number(c.max_deviation, false) +
           (pass ? " PASS" : " FAIL") + "\n";
  }
  out += std::string("oracle-check: ") + (all_pass ? "PASS" : "FAIL") +
         " (worst deviation " +
         format_number(worst_deviation(cases), false) + ", tolerance " +
         format_number(kTol, false) + ")\n";
  std::fwrite(out.data(), 1, out.size(), stdout);
  return all_pass ? 0 : 3;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--channel", o.channel,
                  "depolarizing | biased | flip | custom:a,b,c,d")
      ->capture_default_str();
  cmd->add_option("--p00", o.p00, "identity weight of the named family")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "flip family: X share of the noise")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--delta", o.delta, "flip family: Y share of the noise")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--m", o.m, "carrier count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--code", o.code,
                  "star | pairwise | three | custom:<generators> "
                  "(comma-separated Pauli strings, e.g. custom:X1 X2,Z0 Z1 Z2)")
      ->capture_default_str();
  cmd->add_flag("--no-preprocess", o.no_preprocess,
                "skip the phi-/psi- pre-processing rotations");
  cmd->add_option("--e", o.e, "memory depolarizing rate per stored qubit")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--f", o.f, "measurement flip rate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--protocol", o.protocol, "caepp | twepp")
      ->check(CLI::IsMember({"caepp", "twepp"}))
      ->capture_default_str();
  cmd->add_option("--twepp-variant", o.variant, "none | bbpssw | dejmps")
      ->check(CLI::IsMember({"none", "bbpssw", "dejmps"}))
      ->capture_default_str();
  cmd->add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "caepp: exact simulator for carrier-assisted entanglement "
      "purification over Pauli channels"};
  app.require_subcommand(1);

  CommonOpts traj_opts;
  CLI::App* traj = app.add_subcommand(
      "trajectory", "success-conditioned fidelity per purification round");
  add_common_flags(traj, traj_opts);
  traj->add_option("--rounds", traj_opts.rounds, "round budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  traj->add_option("--target-f", traj_opts.target_f,
                   "stop once the fidelity reaches this value");

  CommonOpts fp_opts;
  double fp_tol = 1e-12;
  size_t fp_max_iter = 100000;
  CLI::App* fp = app.add_subcommand(
      "fixed-point", "maximum convergent fidelity of the round map");
  add_common_flags(fp, fp_opts);
  fp->add_option("--tol", fp_tol, "convergence tolerance (max-norm change)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fp->add_option("--max-iter", fp_max_iter, "iteration budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<double> sweep_p00 = {0.53, 0.55, 0.60, 0.65, 0.70};
  size_t sweep_m_min = 1, sweep_m_max = 40;
  std::string sweep_format = "csv";
  CLI::App* sw = app.add_subcommand(
      "sweep-m",
      "star-code fixed point versus carrier count (depolarizing family)");
  sw->add_option("--p00", sweep_p00, "depolarizing identity weights")
      ->capture_default_str();
  sw->add_option("--m-min", sweep_m_min, "smallest carrier count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sw->add_option("--m-max", sweep_m_max, "largest carrier count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sw->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::vector<double> nc_f_in = {0.6, 0.7, 0.8, 0.9};
  std::string nc_e_range = "0,0.2,11";
  std::string nc_f_range = "0,0.2,11";
  std::string nc_variant = "none";
  std::string nc_format = "csv";
  CLI::App* nc = app.add_subcommand(
      "noise-compare",
      "round-1 fidelity under operational noise: one carrier measurement "
      "versus the two-way protocol's two");
  nc->add_option("--f-in", nc_f_in, "input fidelities (isotropic pairs)")
      ->capture_default_str();
  nc->add_option("--e-range", nc_e_range,
                 "memory-rate sweep start,stop,count (f = 0)")
      ->capture_default_str();
  nc->add_option("--f-range", nc_f_range,
                 "flip-rate sweep start,stop,count (e = 0)")
      ->capture_default_str();
  nc->add_option("--twepp-variant", nc_variant, "none | bbpssw | dejmps")
      ->check(CLI::IsMember({"none", "bbpssw", "dejmps"}))
      ->capture_default_str();
  nc->add_option("--format", nc_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::string ghz_ab = "depolarizing:0.75";
  std::string ghz_ac = "depolarizing:0.75";
  int ghz_rounds = 1;
  std::string ghz_format = "csv";
  CLI::App* gz = app.add_subcommand(
      "ghz", "tripartite round: one carrier to Bob and one to Carol");
  gz->add_option("--ab", ghz_ab,
                 "Alice-Bob channel spec (family:params or custom:a,b,c,d)")
      ->capture_default_str();
  gz->add_option("--ac", ghz_ac, "Alice-Carol channel spec")
      ->capture_default_str();
  gz->add_option("--extrapolate-rounds", ghz_rounds,
                 "rounds beyond the first (extrapolated: reuses the output "
                 "as the shared state with the same carrier distribution)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gz->add_option("--format", ghz_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  size_t oc_grid = 20;
  CLI::App* oc = app.add_subcommand(
      "oracle-check",
      "re-run every engine against the dense density-matrix oracle");
  oc->add_option("--grid", oc_grid, "points per parameter axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (traj->parsed()) return cmd_trajectory(traj_opts);
    if (fp->parsed()) return cmd_fixed_point(fp_opts, fp_tol, fp_max_iter);
    if (sw->parsed()) {
      return cmd_sweep_m(sweep_p00, sweep_m_min, sweep_m_max, sweep_format);
    }
    if (nc->parsed()) {
      return cmd_noise_compare(nc_f_in, nc_e_range, nc_f_range, nc_variant,
                               nc_format);
    }
    if (gz->parsed()) return cmd_ghz(ghz_ab, ghz_ac, ghz_rounds, ghz_format);
    if (oc->parsed()) return cmd_oracle_check(oc_grid);
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const convergence_error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  } catch (const protocol_abort_error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  }
  return 0;
}
