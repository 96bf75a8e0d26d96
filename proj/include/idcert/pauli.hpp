// N-qubit Pauli operators in binary symplectic form (one machine word per part).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idcert/common.hpp"

namespace idcert {

// A Pauli operator i^phase_exp * prod_q X^{x_q} Z^{z_q} on n qubits (n <= 64).
// Qubit q (1-based) lives at bit q-1 of the x/z masks. Y == i*X*Z, so the
// canonical positive string "Y" is {x=1, z=1, phase_exp=1}.
struct PauliOperator {
  int n = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase_exp = 0;  // exponent of i, mod 4

  bool operator==(const PauliOperator&) const = default;
};

// Nonempty set of qubit positions used to restrict operators to sub-registers.
struct QubitSubset {
  int n = 0;               // width of the parent register
  std::uint64_t mask = 0;  // bit q-1 selects qubit q

  int count() const;
  bool empty() const { return mask == 0; }
  bool full() const;
  std::vector<int> qubits() const;  // ascending, 1-based
};

// Parse "XYZI" or "-IZYY" or "+XX". Errors name the offending 1-based letter
// position. The optional sign prefix is not counted as a position.
PauliOperator parse_pauli(const std::string& text);

// Canonical text form: optional '-' then one letter per qubit. Requires a
// Hermitian operator (phase reduces to a +/- sign).
std::string format_pauli(const PauliOperator& p);

// Letter at qubit q in {'I','X','Y','Z'}.
char pauli_letter(const PauliOperator& p, int q);

// True when i^{phase_exp} * (i factors from embedded Y's) is +/-1.
bool is_hermitian(const PauliOperator& p);

// +1 or -1 for Hermitian operators; errors otherwise.
int hermitian_sign(const PauliOperator& p);

// Number of Y letters (x&z bits).
int y_count(const PauliOperator& p);

// Exact operator product including the phase. Errors on width mismatch.
PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);

// Symplectic-form commutation test. Errors on width mismatch.
bool commutes(const PauliOperator& a, const PauliOperator& b);

// Keep only the selected columns, reindexed in ascending qubit order. The
// result is the canonical positive form of the kept letters: the phase carries
// only the i factors of kept Y's, and any sign of p is NOT distributed to the
// parts (callers keep that bookkeeping). Errors on empty subset or mismatch.
PauliOperator restrict(const PauliOperator& p, const QubitSubset& s);

// Number of non-identity columns.
int weight(const PauliOperator& p);

// Structural copy: same letters, canonical positive phase.
PauliOperator structural(const PauliOperator& p);

// Identity (weight 0) regardless of phase?
bool is_identity_letters(const PauliOperator& p);

// Strict ordering on canonical text (structural letters, then sign).
bool canonical_less(const PauliOperator& a, const PauliOperator& b);

}  // namespace idcert
