// Stabilizer groups: generator validation, element enumeration, eigenprojectors.
#pragma once

#include <optional>
#include <vector>

#include "idcert/states.hpp"

namespace idcert {

// k independent commuting signed generators and all 2^k group elements
// (canonically sorted, identity first). -I is never an element.
struct StabilizerGroup {
  int n = 0;
  std::vector<PauliOperator> generators;
  std::vector<PauliOperator> elements;

  int k() const { return static_cast<int>(generators.size()); }
  std::vector<PauliOperator> nonidentity_elements() const;
};

// Joint eigenspace of commuting observables at chosen eigenvalues.
struct EigenprojectorResult {
  QuantumState state;  // projector / rank, as a mixed state
  int rank = 0;        // 2^{n-k}
  std::optional<QuantumState> pure;  // present when rank == 1
};

// Graph-state generators g_a = X_a * prod_{b in N(a)} Z_b.
std::vector<PauliOperator> graph_generators(const std::vector<std::vector<int>>& adjacency);

// Generator lists behind the named states' textbook fidelity bounds
// (GHZ: nearest-neighbour ZZ chain then X^n; clusters: path-graph generators
// in the cluster basis; basis states: signed single-qubit Z's).
std::optional<std::vector<PauliOperator>> canonical_generators(const std::string& name, int n);

// Validates width/Hermiticity/commutation/independence and enumerates all 2^k
// elements. Distinguishes "dependent generators" from sign-inconsistent sets
// that would generate -I.
StabilizerGroup group_from_generators(const std::vector<PauliOperator>& gens);

// Screen all 4^n Paulis (n <= 6) for expectation +/-1; a stabilizer state
// yields exactly 2^n hits, anything fewer is an error.
StabilizerGroup state_stabilizer(const QuantumState& state);

// prod_i (I + lambda_i O_i)/2 for commuting Hermitian rows. An inconsistent
// assignment gives an empty eigenspace error.
EigenprojectorResult joint_eigenprojector(const std::vector<PauliOperator>& rows,
                                          const std::vector<int>& lambdas);

// Rank of the rows' (x|z) vectors over GF(2).
int gf2_rank(const std::vector<PauliOperator>& ops);

}  // namespace idcert
