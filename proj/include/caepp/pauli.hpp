#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Phase-free Pauli strings, the carrier stabilizer codes, and the classical
// frame propagation used to grade error strings against a code.
//
// Qubit 0 is always the shared data qubit; qubits 1..m are the carriers.
// Phases are deliberately not tracked: every state handled by the round
// engines is an incoherent mixture over Pauli error strings, and the
// accept/classify outcome of a string is phase-insensitive.

namespace caepp {

// An n-qubit Pauli as a pair of bit masks (bit k = qubit k): x flags bit
// flips, z flags phase flips, both set = Y.  Width is capped at 64 qubits.
class PauliString {
 public:
  static constexpr size_t kMaxQubits = 64;

  explicit PauliString(size_t num_qubits);  // identity
  PauliString(size_t num_qubits, uint64_t x_bits, uint64_t z_bits);

  // Parses whitespace-separated factors like "X1 X2" or "Z0 Z1 Z2"
  // (letters I/X/Y/Z, 0-based qubit index; a bare "I" is allowed).  With
  // num_qubits == 0 the width is inferred as max index + 1 (at least 1).
  static PauliString parse(std::string_view text, size_t num_qubits = 0);

  size_t num_qubits() const { return n_; }
  bool x(size_t k) const { return (x_ >> k) & 1; }
  bool z(size_t k) const { return (z_ >> k) & 1; }
  void set_x(size_t k, bool v);
  void set_z(size_t k, bool v);
  uint64_t x_bits() const { return x_; }
  uint64_t z_bits() const { return z_; }
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  // Phase-free product (bitwise XOR of both masks).
  PauliString& operator*=(const PauliString& other);
  friend PauliString operator*(PauliString a, const PauliString& b) {
    a *= b;
    return a;
  }

  bool operator==(const PauliString&) const = default;

  std::string str() const;  // "I" or factors in qubit order, e.g. "X0 Z2"

 private:
  size_t n_;
  uint64_t x_, z_;
};

// Symplectic commutation test.
bool commutes(const PauliString& a, const PauliString& b);

enum class CodeFamily { single, star, pairwise, three_carrier, custom };

struct Gate {
  enum class Kind : uint8_t { H, CNOT };
  Kind kind;
  uint8_t q0;  // H target, or CNOT control
  uint8_t q1;  // CNOT target (unused for H)

  bool operator==(const Gate&) const = default;
};

class CliffordCircuit {
 public:
  explicit CliffordCircuit(size_t num_qubits);

  void h(size_t q);
  void cnot(size_t control, size_t target);

  size_t num_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }

  bool operator==(const CliffordCircuit&) const = default;

 private:
  size_t n_;
  std::vector<Gate> gates_;
};

// A carrier code: commuting generators on m + 1 qubits.  Codes built by the
// factories carry their canonical encoding circuit; custom codes may attach
// one (it is validated against the generators) or omit it, in which case
// they support detection queries only.
struct StabilizerCode {
  size_t num_qubits = 1;
  std::vector<PauliString> generators;
  CodeFamily family = CodeFamily::custom;
  std::optional<CliffordCircuit> circuit;

  size_t num_carriers() const { return num_qubits - 1; }
};

// Star code on m carriers: {X1 Xm, ..., X(m-1) Xm, Z0 Z1 ... Zm}.
// m = 1 is the single-carrier code {Z0 Z1}.
StabilizerCode star_code(size_t m);

// Pairwise code on `blocks` blocks of two carriers:
// per block j: {X(2j-1) X(2j), Z0 Z(2j-1) Z(2j)}.
StabilizerCode pairwise_code(size_t blocks);

// Star code on three carriers, tagged as its own family.
StabilizerCode three_carrier_code();

// Builds a code from explicit generators.  Generator sets that are set-equal
// to a star or pairwise family adopt that family's canonical circuit; when
// an explicit circuit is supplied it is validated instead (propagating each
// carrier's Z through it must hit the generator set bijectively).
StabilizerCode custom_code(std::vector<PauliString> generators,
                           std::optional<CliffordCircuit> circuit = {});

// True iff the error anticommutes with at least one generator.
bool detects(const StabilizerCode& code, const PauliString& error);

// The code's encoding circuit (qubit 0 = data qubit entering the encoder).
// Throws std::invalid_argument for custom codes without a circuit.
CliffordCircuit encoding_circuit(const StabilizerCode& code);

// Conjugates p through the circuit gate by gate; with reversed = true the
// gate list is applied in reverse order, which is the circuit inverse since
// H and CNOT are involutions.  Rules: H swaps x and z on its qubit;
// CNOT(c, t) adds x_c into x_t and z_t into z_c.
PauliString propagate(const CliffordCircuit& circuit, PauliString p,
                      bool reversed = false);

// Result of pushing an error through the decoding circuit (the encoding
// circuit reversed, with qubit 0 as the receiver's shared qubit):
// syndrome bit k-1 is the x component on carrier k (the measured-qubit
// flip), residual_x/z is the leftover Pauli on qubit 0, which indexes the
// output Bell coefficient.
struct DecodeResult {
  uint64_t syndrome = 0;
  bool residual_x = false;
  bool residual_z = false;

  bool accepted() const { return syndrome == 0; }
};
DecodeResult decode_classify(const StabilizerCode& code,
                             const PauliString& error);

}  // namespace caepp
