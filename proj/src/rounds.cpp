#include "caepp/rounds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace caepp {

namespace {

// Composing two independent Pauli error sources on the same pair XORs the
// (x, z) labels, so the packed 2-bit indices XOR as well.
std::array<double, 4> xor_convolve(const std::array<double, 4>& p,
                                   const std::array<double, 4>& q) {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i ^ j] += p[i] * q[j];
  }
  return out;
}

// Depolarizing error of rate e on one stored qubit.
std::array<double, 4> memory_channel(double e) {
  return {1.0 - 0.75 * e, 0.25 * e, 0.25 * e, 0.25 * e};
}

void check_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

RoundOutcome finish(const std::array<double, 4>& unnormalized) {
  const double p =
      unnormalized[0] + unnormalized[1] + unnormalized[2] + unnormalized[3];
  if (p <= 0.0) {
    throw protocol_abort_error(
        "round cannot succeed: acceptance probability is zero");
  }
  BellDiagonalState out({unnormalized[0] / p, unnormalized[1] / p,
                         unnormalized[2] / p, unnormalized[3] / p});
  return {p, out, out.coeff(0, 0)};
}

// The single-carrier update rule, shared verbatim by the closed
// single-carrier round and the two-way round so the two agree bit for bit.
RoundOutcome closed_kernel(const std::array<double, 4>& r,
                           const std::array<double, 4>& c) {
  return finish({r[0] * c[0] + r[1] * c[1], r[0] * c[1] + r[1] * c[0],
                 r[2] * c[2] + r[3] * c[3], r[2] * c[3] + r[3] * c[2]});
}

// Sums every error string on the shared qubit and the carriers.  Each
// string is graded through the decoding circuit; a string with true
// syndrome s is declared all-clear with probability
// prod_k (s_k ? f : 1 - f), which at f = 0 reduces to exact postselection
// on the zero syndrome.  Returns the unnormalized accepted coefficients.
std::array<double, 4> enumerate_accepted(
    const std::array<double, 4>& pair_coeffs, const StabilizerCode& code,
    const std::array<double, 4>& carrier_probs, double flip_rate) {
  const size_t m = code.num_carriers();
  if (m > kMaxEnumerationCarriers) {
    throw std::invalid_argument(
        "enumeration handles at most 10 carriers; use star_closed_form for "
        "larger star codes");
  }
  const CliffordCircuit circuit = encoding_circuit(code);
  const size_t n_qubits = code.num_qubits;

  std::array<double, 4> accepted{0.0, 0.0, 0.0, 0.0};
  const uint64_t combos = 1ull << (2 * m);
  for (int pair = 0; pair < 4; ++pair) {
    const double pair_weight = pair_coeffs[pair];
    if (pair_weight == 0.0) continue;
    for (uint64_t combo = 0; combo < combos; ++combo) {
      double w = pair_weight;
      uint64_t x_bits = uint64_t(pair) >> 1;
      uint64_t z_bits = uint64_t(pair) & 1;
      for (size_t k = 0; k < m; ++k) {
        const int err = int((combo >> (2 * k)) & 3);
        w *= carrier_probs[err];
        x_bits |= uint64_t(err >> 1) << (k + 1);
        z_bits |= uint64_t(err & 1) << (k + 1);
      }
      if (w == 0.0) continue;
      const PauliString image =
          propagate(circuit, PauliString(n_qubits, x_bits, z_bits),
                    /*reversed=*/true);
      const uint64_t syndrome = image.x_bits() >> 1;
      double acc = 1.0;
      for (size_t k = 0; k < m; ++k) {
        acc *= ((syndrome >> k) & 1) ? flip_rate : (1.0 - flip_rate);
      }
      if (acc == 0.0) continue;
      accepted[(int(image.x(0)) << 1) | int(image.z(0))] += w * acc;
    }
  }
  return accepted;
}

BellDiagonalState apply_variant(const BellDiagonalState& s, TweppVariant v) {
  switch (v) {
    case TweppVariant::none:
      return s;
    case TweppVariant::bbpssw:
      return twirl_isotropic(s);
    case TweppVariant::dejmps:
      return preprocess_swap(s);
  }
  throw std::logic_error("twepp variant out of range");
}

}  // namespace

RoundOutcome caepp_round(const BellDiagonalState& state,
                         const RoundConfig& cfg) {
  if (cfg.memory_error != 0.0 || cfg.measurement_flip != 0.0) {
    throw std::invalid_argument(
        "caepp_round is the noiseless-operations path; use noisy_round when "
        "e or f is nonzero");
  }
  const BellDiagonalState s =
      cfg.pre_process ? preprocess_swap(state) : state;
  const PauliChannel ch =
      cfg.pre_process ? channel_encdec_swap(cfg.channel) : cfg.channel;
  return finish(enumerate_accepted(s.coeffs(), cfg.code, ch.probs(), 0.0));
}

RoundOutcome caepp_round_closed_single(const BellDiagonalState& state,
                                       const PauliChannel& channel,
                                       bool pre_process) {
  const BellDiagonalState s = pre_process ? preprocess_swap(state) : state;
  const PauliChannel ch =
      pre_process ? channel_encdec_swap(channel) : channel;
  return closed_kernel(s.coeffs(), ch.probs());
}

AbcCoefficients abc_coefficients(double p00, size_t m) {
  if (m < 1) throw std::invalid_argument("abc_coefficients: m must be >= 1");
  check_rate(p00, "p00");
  AbcCoefficients k;
  k.alpha = (4.0 * p00 - 1.0) / 3.0;
  const auto exp = static_cast<double>(m);
  k.a = std::pow((1.0 + k.alpha) / 2.0, exp);
  k.b = std::pow((1.0 - k.alpha) / 2.0, exp);
  k.c = std::pow(k.alpha, exp);
  return k;
}

RoundOutcome star_closed_form(const BellDiagonalState& state, double p00,
                              size_t m) {
  const AbcCoefficients k = abc_coefficients(p00, m);
  const auto& q = state.coeffs();
  const double apc = k.a + k.c;
  const double amc = k.a - k.c;
  const std::array<double, 4> n{
      apc * q[0] + k.b * q[3], apc * q[3] + k.b * q[0],
      amc * q[2] + k.b * q[1], amc * q[1] + k.b * q[2]};
  RoundOutcome out = finish(n);
  // The normalizer counts both carrier-parity sectors; only half of the
  // ideal branch is declared Success.
  out.p_succ *= 0.5;
  return out;
}

RoundOutcome twepp_round(const BellDiagonalState& a,
                         const BellDiagonalState& b, TweppVariant variant) {
  return closed_kernel(apply_variant(a, variant).coeffs(),
                       apply_variant(b, variant).coeffs());
}

RoundOutcome noisy_round(const BellDiagonalState& state,
                         const RoundConfig& cfg) {
  check_rate(cfg.memory_error, "memory_error");
  check_rate(cfg.measurement_flip, "measurement_flip");
  const BellDiagonalState s =
      cfg.pre_process ? preprocess_swap(state) : state;
  const PauliChannel ch =
      cfg.pre_process ? channel_encdec_swap(cfg.channel) : cfg.channel;
  const std::array<double, 4> d = memory_channel(cfg.memory_error);
  // The receiver half sits upstream of the decoding circuit, so its memory
  // error folds into the pair label before grading; the sender half is idle
  // after encoding, so its error relabels the surviving output instead.
  const std::array<double, 4> graded = enumerate_accepted(
      xor_convolve(s.coeffs(), d), cfg.code, ch.probs(),
      cfg.measurement_flip);
  return finish(xor_convolve(graded, d));
}

RoundOutcome noisy_twepp_round(const BellDiagonalState& a,
                               const BellDiagonalState& b,
                               TweppVariant variant, double memory_error,
                               double measurement_flip) {
  check_rate(memory_error, "memory_error");
  check_rate(measurement_flip, "measurement_flip");
  const std::array<double, 4> pa = apply_variant(a, variant).coeffs();
  const std::array<double, 4> pb = apply_variant(b, variant).coeffs();
  const std::array<double, 4> d = memory_channel(memory_error);
  const double f = measurement_flip;
  // The parties compare one outcome each; the declared parity survives two
  // flip opportunities.
  const double agree = (1.0 - f) * (1.0 - f) + f * f;
  const double disagree = 2.0 * f * (1.0 - f);

  // Six independent error slots: the two pair labels plus one memory error
  // per stored qubit (Alice/Bob halves of the kept and consumed pairs).
  // XOR of the packed labels XORs the (x, z) components.  The measured
  // parity collects every x component (memory errors on the kept halves
  // propagate onto the measured qubits through the bilateral CNOTs); the
  // kept pair keeps the x components of its own three slots and the z
  // components of all six.
  std::array<double, 4> n{0.0, 0.0, 0.0, 0.0};
  for (int e1 = 0; e1 < 4; ++e1) {
    for (int e2 = 0; e2 < 4; ++e2) {
      for (int ma1 = 0; ma1 < 4; ++ma1) {
        for (int ma2 = 0; ma2 < 4; ++ma2) {
          for (int mb1 = 0; mb1 < 4; ++mb1) {
            for (int mb2 = 0; mb2 < 4; ++mb2) {
              const double w =
                  pa[e1] * pb[e2] * d[ma1] * d[ma2] * d[mb1] * d[mb2];
              if (w == 0.0) continue;
              const int all = e1 ^ e2 ^ ma1 ^ ma2 ^ mb1 ^ mb2;
              const int kept = e1 ^ ma1 ^ mb1;
              const double acc = ((all >> 1) & 1) ? disagree : agree;
              n[(kept & 2) | (all & 1)] += w * acc;
            }
          }
        }
      }
    }
  }
  return finish(n);
}

}  // namespace caepp
