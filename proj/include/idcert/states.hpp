// Dense pure/mixed quantum states, named fixtures, and linear-algebra ops.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idcert/pauli.hpp"

namespace idcert {

// Dense state on n <= 10 qubits. Qubit 1 is the most significant bit of the
// amplitude index, so |q1 q2 ... qN> maps to index q1*2^{N-1} + ... + qN.
struct QuantumState {
  int n = 0;
  bool pure = true;
  Eigen::VectorXcd amps;  // pure states
  Eigen::MatrixXcd rho;   // mixed states

  Eigen::Index dim() const { return Eigen::Index(1) << n; }
};

// Descending Schmidt coefficients across one bipartition; sum of squares is 1.
struct SchmidtSpectrum {
  QubitSubset bipartition;
  std::vector<double> coeffs;

  double max_coeff_sq() const { return coeffs.empty() ? 0.0 : coeffs[0] * coeffs[0]; }
};

QuantumState make_pure(int n, Eigen::VectorXcd amps);
QuantumState make_mixed(int n, Eigen::MatrixXcd rho);

// Named fixtures.
QuantumState make_ghz(int n);
QuantumState make_w(int n);  // all-positive amplitudes
QuantumState make_c_lin();   // (|0000>+|0011>+|1100>-|1111>)/2
QuantumState make_c_shear(); // (|0000>+|0101>+|1010>-|1111>)/2
QuantumState make_c_z();     // (|0000>+|0110>+|1001>-|1111>)/2
QuantumState make_basis(const std::string& bits);
// Product of |phi+> pairs at the given 1-based qubit pairs (must tile 1..n).
QuantumState make_bell_product(int n, const std::vector<std::pair<int, int>>& pairs);
// Graph state from a symmetric zero-diagonal adjacency matrix.
QuantumState make_graph_state(const std::vector<std::vector<int>>& adjacency);
// Dispatcher for {"name","n"} specs: ghz, w, c_lin, c_shear, c_z.
QuantumState make_named_state(const std::string& name, int n);

// <state|obs|state> or Tr(rho*obs); requires Hermitian obs and matching width.
// The imaginary part must vanish within kTolExact.
double expectation(const QuantumState& state, const PauliOperator& obs);

// |<a|b>|^2, <psi|rho|psi>, or (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const QuantumState& a, const QuantumState& b);

// SVD of the amplitudes reshaped across (subset | complement). Errors on
// mixed states and on empty or full subsets.
SchmidtSpectrum schmidt_spectrum(const QuantumState& state, const QubitSubset& subset);

// rho -> (1-p) rho + p I/2^n for p in [0,1].
QuantumState depolarize(const QuantumState& state, double p);

// Apply one 2x2 unitary per qubit; each must be unitary within kTolInput.
QuantumState apply_local_unitaries(const QuantumState& state,
                                   const std::vector<Eigen::Matrix2cd>& us);

// Dense matrix of a Pauli operator (oracle-friendly; built from letters).
Eigen::MatrixXcd dense_matrix(const PauliOperator& p);

// Operator bit-mask (bit q-1) converted to amplitude-index space (bit n-q).
std::uint64_t to_index_mask(int n, std::uint64_t qubit_mask);

}  // namespace idcert
