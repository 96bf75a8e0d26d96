#include "idcert/pauli.hpp"

#include <bit>

namespace idcert {

namespace {

void check_width(const PauliOperator& a, const PauliOperator& b) {
  if (a.n != b.n) {
    throw InputError("Pauli width mismatch: " + std::to_string(a.n) +
                     " vs " + std::to_string(b.n) + " qubits");
  }
}

int popcount(std::uint64_t v) { return std::popcount(v); }

}  // namespace

int QubitSubset::count() const { return popcount(mask); }

bool QubitSubset::full() const {
  return n > 0 && mask == ((n == 64) ? ~0ull : ((1ull << n) - 1));
}

std::vector<int> QubitSubset::qubits() const {
  std::vector<int> qs;
  for (int q = 1; q <= n; ++q)
    if (mask >> (q - 1) & 1) qs.push_back(q);
  return qs;
}

PauliOperator parse_pauli(const std::string& text) {
  std::size_t start = 0;
  int sign_phase = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    sign_phase = (text[0] == '-') ? 2 : 0;
    start = 1;
  }
  if (text.size() == start) throw InputError("empty Pauli string");
  if (text.size() - start > 64) throw InputError("Pauli string exceeds 64 qubits");
  PauliOperator p;
  p.n = static_cast<int>(text.size() - start);
  int ny = 0;
  for (int q = 1; q <= p.n; ++q) {
    const char c = text[start + q - 1];
    const std::uint64_t bit = 1ull << (q - 1);
    switch (c) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Z': p.z |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; ++ny; break;
      default:
        throw InputError(std::string("invalid Pauli character '") + c +
                         "' at position " + std::to_string(q));
    }
  }
  p.phase_exp = (sign_phase + ny) % 4;
  return p;
}

char pauli_letter(const PauliOperator& p, int q) {
  const bool xb = p.x >> (q - 1) & 1;
  const bool zb = p.z >> (q - 1) & 1;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

int y_count(const PauliOperator& p) { return popcount(p.x & p.z); }

bool is_hermitian(const PauliOperator& p) {
  return ((p.phase_exp - y_count(p)) % 4 + 4) % 4 % 2 == 0;
}

int hermitian_sign(const PauliOperator& p) {
  const int r = ((p.phase_exp - y_count(p)) % 4 + 4) % 4;
  if (r == 0) return 1;
  if (r == 2) return -1;
  throw InputError("operator is not Hermitian (residual phase i^" +
                   std::to_string(r) + ")");
}

std::string format_pauli(const PauliOperator& p) {
  std::string s;
  if (hermitian_sign(p) < 0) s.push_back('-');
  for (int q = 1; q <= p.n; ++q) s.push_back(pauli_letter(p, q));
  return s;
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  check_width(a, b);
  // (X^xa Z^za)(X^xb Z^zb) = (-1)^{za.xb} X^{xa^xb} Z^{za^zb}, per qubit.
  PauliOperator r;
  r.n = a.n;
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  r.phase_exp = (a.phase_exp + b.phase_exp + 2 * popcount(a.z & b.x)) % 4;
  return r;
}

bool commutes(const PauliOperator& a, const PauliOperator& b) {
  check_width(a, b);
  return (popcount(a.x & b.z) + popcount(a.z & b.x)) % 2 == 0;
}

PauliOperator restrict(const PauliOperator& p, const QubitSubset& s) {
  if (s.n != p.n) {
    throw InputError("subset register width " + std::to_string(s.n) +
                     " does not match operator width " + std::to_string(p.n));
  }
  if (s.empty()) throw InputError("cannot restrict to an empty qubit subset");
  PauliOperator r;
  r.n = s.count();
  int out = 0;
  for (int q = 1; q <= p.n; ++q) {
    if (!(s.mask >> (q - 1) & 1)) continue;
    if (p.x >> (q - 1) & 1) r.x |= 1ull << out;
    if (p.z >> (q - 1) & 1) r.z |= 1ull << out;
    ++out;
  }
  r.phase_exp = y_count(r) % 4;
  return r;
}

int weight(const PauliOperator& p) { return popcount(p.x | p.z); }

PauliOperator structural(const PauliOperator& p) {
  PauliOperator r = p;
  r.phase_exp = y_count(p) % 4;
  return r;
}

bool is_identity_letters(const PauliOperator& p) { return (p.x | p.z) == 0; }

bool canonical_less(const PauliOperator& a, const PauliOperator& b) {
  for (int q = 1; q <= std::min(a.n, b.n); ++q) {
    const char ca = pauli_letter(a, q), cb = pauli_letter(b, q);
    if (ca != cb) return ca < cb;
  }
  if (a.n != b.n) return a.n < b.n;
  return a.phase_exp < b.phase_exp;
}

}  // namespace idcert
