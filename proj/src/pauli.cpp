#include "caepp/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>

namespace caepp {

namespace {

void check_width(size_t n) {
  if (n < 1 || n > PauliString::kMaxQubits) {
    throw std::invalid_argument("PauliString: width must be in [1, 64]");
  }
}

}  // namespace

PauliString::PauliString(size_t num_qubits) : n_(num_qubits), x_(0), z_(0) {
  check_width(n_);
}

PauliString::PauliString(size_t num_qubits, uint64_t x_bits, uint64_t z_bits)
    : n_(num_qubits), x_(x_bits), z_(z_bits) {
  check_width(n_);
  const uint64_t mask = (n_ == 64) ? ~0ull : ((1ull << n_) - 1);
  if ((x_ & ~mask) || (z_ & ~mask)) {
    throw std::invalid_argument("PauliString: bits set beyond width");
  }
}

PauliString PauliString::parse(std::string_view text, size_t num_qubits) {
  struct Factor {
    char letter;
    size_t index;
  };
  std::vector<Factor> factors;
  size_t max_index = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const char letter = static_cast<char>(
        std::toupper(static_cast<unsigned char>(text[i])));
    if (letter != 'I' && letter != 'X' && letter != 'Y' && letter != 'Z') {
      throw std::invalid_argument("PauliString::parse: unknown factor letter");
    }
    ++i;
    size_t start = i;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (start == i) {
      if (letter == 'I') continue;  // bare identity factor
      throw std::invalid_argument(
          "PauliString::parse: factor needs a qubit index");
    }
    size_t index = 0;
    for (size_t j = start; j < i; ++j) index = index * 10 + (text[j] - '0');
    if (index >= kMaxQubits) {
      throw std::invalid_argument("PauliString::parse: qubit index too large");
    }
    factors.push_back({letter, index});
    max_index = std::max(max_index, index);
  }
  size_t n = num_qubits;
  if (n == 0) n = factors.empty() ? 1 : max_index + 1;
  PauliString p(n);
  for (const auto& f : factors) {
    if (f.index >= n) {
      throw std::invalid_argument(
          "PauliString::parse: qubit index exceeds width");
    }
    if (f.letter == 'X' || f.letter == 'Y') p.set_x(f.index, !p.x(f.index));
    if (f.letter == 'Z' || f.letter == 'Y') p.set_z(f.index, !p.z(f.index));
  }
  return p;
}

void PauliString::set_x(size_t k, bool v) {
  if (k >= n_) throw std::out_of_range("PauliString: qubit out of range");
  x_ = (x_ & ~(1ull << k)) | (uint64_t(v) << k);
}

void PauliString::set_z(size_t k, bool v) {
  if (k >= n_) throw std::out_of_range("PauliString: qubit out of range");
  z_ = (z_ & ~(1ull << k)) | (uint64_t(v) << k);
}

PauliString& PauliString::operator*=(const PauliString& other) {
  if (other.n_ != n_) {
    throw std::invalid_argument("PauliString: width mismatch in product");
  }
  x_ ^= other.x_;
  z_ ^= other.z_;
  return *this;
}

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::string out;
  for (size_t k = 0; k < n_; ++k) {
    const bool xb = x(k), zb = z(k);
    if (!xb && !zb) continue;
    if (!out.empty()) out += ' ';
    out += xb ? (zb ? 'Y' : 'X') : 'Z';
    out += std::to_string(k);
  }
  return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("commutes: width mismatch");
  }
  const int overlaps = std::popcount(a.x_bits() & b.z_bits()) +
                       std::popcount(a.z_bits() & b.x_bits());
  return (overlaps & 1) == 0;
}

CliffordCircuit::CliffordCircuit(size_t num_qubits) : n_(num_qubits) {
  check_width(n_);
}

void CliffordCircuit::h(size_t q) {
  if (q >= n_) throw std::out_of_range("CliffordCircuit::h: qubit range");
  gates_.push_back({Gate::Kind::H, static_cast<uint8_t>(q), 0});
}

void CliffordCircuit::cnot(size_t control, size_t target) {
  if (control >= n_ || target >= n_ || control == target) {
    throw std::out_of_range("CliffordCircuit::cnot: bad qubit pair");
  }
  gates_.push_back({Gate::Kind::CNOT, static_cast<uint8_t>(control),
                    static_cast<uint8_t>(target)});
}

namespace {

void apply_gate_to_frame(const Gate& g, uint64_t& x, uint64_t& z) {
  if (g.kind == Gate::Kind::H) {
    const uint64_t mask = 1ull << g.q0;
    const uint64_t xb = x & mask, zb = z & mask;
    x = (x & ~mask) | zb;
    z = (z & ~mask) | xb;
  } else {
    // CNOT: X on the control spreads to the target, Z on the target spreads
    // to the control.
    x ^= ((x >> g.q0) & 1) << g.q1;
    z ^= ((z >> g.q1) & 1) << g.q0;
  }
}

void check_generators(const std::vector<PauliString>& gens, size_t n) {
  if (gens.size() > n) {
    throw std::invalid_argument(
        "StabilizerCode: more generators than qubits");
  }
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].num_qubits() != n) {
      throw std::invalid_argument("StabilizerCode: generator width mismatch");
    }
    if (gens[i].is_identity()) {
      throw std::invalid_argument("StabilizerCode: identity generator");
    }
    for (size_t j = i + 1; j < gens.size(); ++j) {
      if (!commutes(gens[i], gens[j])) {
        throw std::invalid_argument(
            "StabilizerCode: generators must mutually commute");
      }
      if (gens[i] == gens[j]) {
        throw std::invalid_argument("StabilizerCode: duplicate generator");
      }
    }
  }
}

CliffordCircuit star_circuit(size_t m) {
  CliffordCircuit c(m + 1);
  for (size_t k = 1; k + 1 <= m; ++k) c.h(k);
  for (size_t k = 1; k + 1 <= m; ++k) c.cnot(k, m);
  c.cnot(0, m);
  return c;
}

CliffordCircuit pairwise_circuit(size_t blocks) {
  CliffordCircuit c(2 * blocks + 1);
  for (size_t j = 1; j <= blocks; ++j) {
    c.h(2 * j - 1);
    c.cnot(2 * j - 1, 2 * j);
    c.cnot(0, 2 * j);
  }
  return c;
}

bool same_generator_set(const std::vector<PauliString>& a,
                        const std::vector<PauliString>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& g : a) {
    if (std::find(b.begin(), b.end(), g) == b.end()) return false;
  }
  return true;
}

}  // namespace

StabilizerCode star_code(size_t m) {
  if (m < 1 || m + 1 > PauliString::kMaxQubits) {
    throw std::invalid_argument("star_code: need 1 <= m <= 63");
  }
  const size_t n = m + 1;
  std::vector<PauliString> gens;
  for (size_t k = 1; k + 1 <= m; ++k) {
    PauliString g(n);
    g.set_x(k, true);
    g.set_x(m, true);
    gens.push_back(g);
  }
  PauliString zall(n);
  for (size_t k = 0; k < n; ++k) zall.set_z(k, true);
  gens.push_back(zall);
  check_generators(gens, n);
  return {n, std::move(gens),
          m == 1 ? CodeFamily::single : CodeFamily::star, star_circuit(m)};
}

StabilizerCode pairwise_code(size_t blocks) {
  if (blocks < 1 || 2 * blocks + 1 > PauliString::kMaxQubits) {
    throw std::invalid_argument("pairwise_code: need 1 <= blocks <= 31");
  }
  const size_t n = 2 * blocks + 1;
  std::vector<PauliString> gens;
  for (size_t j = 1; j <= blocks; ++j) {
    const size_t a = 2 * j - 1, b = 2 * j;
    PauliString xx(n);
    xx.set_x(a, true);
    xx.set_x(b, true);
    PauliString zzz(n);
    zzz.set_z(0, true);
    zzz.set_z(a, true);
    zzz.set_z(b, true);
    gens.push_back(xx);
    gens.push_back(zzz);
  }
  check_generators(gens, n);
  return {n, std::move(gens), CodeFamily::pairwise, pairwise_circuit(blocks)};
}

StabilizerCode three_carrier_code() {
  StabilizerCode code = star_code(3);
  code.family = CodeFamily::three_carrier;
  return code;
}

StabilizerCode custom_code(std::vector<PauliString> generators,
                           std::optional<CliffordCircuit> circuit) {
  if (generators.empty()) {
    throw std::invalid_argument("custom_code: no generators");
  }
  const size_t n = generators[0].num_qubits();
  check_generators(generators, n);

  if (circuit) {
    if (circuit->num_qubits() != n) {
      throw std::invalid_argument("custom_code: circuit width mismatch");
    }
    // The circuit must map the carriers' initial Z stabilizers onto the
    // generator set bijectively, which is what makes the zero syndrome
    // equivalent to "undetected".
    std::vector<PauliString> images;
    for (size_t k = 1; k < n; ++k) {
      PauliString zk(n);
      zk.set_z(k, true);
      images.push_back(propagate(*circuit, zk, false));
    }
    if (!same_generator_set(images, generators)) {
      throw std::invalid_argument(
          "custom_code: circuit does not encode these generators");
    }
    return {n, std::move(generators), CodeFamily::custom, std::move(circuit)};
  }

  // No circuit supplied: adopt a canonical one when the set matches a known
  // family (there is no general synthesis).
  if (n >= 2) {
    StabilizerCode star = star_code(n - 1);
    if (same_generator_set(generators, star.generators)) return star;
  }
  if (n >= 3 && n % 2 == 1) {
    StabilizerCode pw = pairwise_code((n - 1) / 2);
    if (same_generator_set(generators, pw.generators)) return pw;
  }
  return {n, std::move(generators), CodeFamily::custom, std::nullopt};
}

bool detects(const StabilizerCode& code, const PauliString& error) {
  if (error.num_qubits() != code.num_qubits) {
    throw std::invalid_argument("detects: error width mismatch");
  }
  for (const auto& g : code.generators) {
    if (!commutes(g, error)) return true;
  }
  return false;
}

CliffordCircuit encoding_circuit(const StabilizerCode& code) {
  if (!code.circuit) {
    throw std::invalid_argument(
        "encoding_circuit: custom code without a circuit is unsupported; "
        "attach one via custom_code");
  }
  return *code.circuit;
}

PauliString propagate(const CliffordCircuit& circuit, PauliString p,
                      bool reversed) {
  if (p.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("propagate: width mismatch");
  }
  uint64_t x = p.x_bits(), z = p.z_bits();
  const auto& gates = circuit.gates();
  if (reversed) {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
      apply_gate_to_frame(*it, x, z);
    }
  } else {
    for (const auto& g : gates) apply_gate_to_frame(g, x, z);
  }
  return PauliString(p.num_qubits(), x, z);
}

DecodeResult decode_classify(const StabilizerCode& code,
                             const PauliString& error) {
  const CliffordCircuit circuit = encoding_circuit(code);
  const PauliString image = propagate(circuit, error, /*reversed=*/true);
  DecodeResult r;
  r.syndrome = image.x_bits() >> 1;  // carrier k at syndrome bit k-1
  r.residual_x = image.x(0);
  r.residual_z = image.z(0);
  return r;
}

}  // namespace caepp
