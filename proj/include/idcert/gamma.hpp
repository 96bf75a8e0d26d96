// Numeric entanglement-class bounds gamma_C = max over an LU orbit of sum |<O_i>|.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "idcert/id_analysis.hpp"

namespace idcert {

// An entanglement class explored through local unitaries of a fixed seed
// (3 Euler angles per qubit, so at most 12 free parameters at four qubits).
struct StateClass {
  std::string label;
  QuantumState seed;
};

struct GammaEstimate {
  std::string class_label;
  double value = 0;  // max over starts of sum_i |<O_i>|
  std::vector<double> best_parameters;
  int n_starts = 0;
  int n_converged = 0;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int iterations = 0;
  bool converged = false;  // simplex diameter < tolerance before the cap
};

// (U_1 x ... x U_N)|seed> with U_q = Rz(a) Ry(b) Rz(c), params = (a,b,c) per qubit.
QuantumState lu_orbit_state(const QuantumState& seed, const std::vector<double>& params);

// sum_i |<psi(params)|O_i|psi(params)>| over the ID's signed rows.
double gamma_objective(const IdTable& id, const QuantumState& seed,
                       const std::vector<double>& params);

// Derivative-free simplex maximization (standard Nelder-Mead coefficients,
// deterministic for a given x0). Errors on non-finite objective values.
NelderMeadResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& objective,
                                 const std::vector<double>& x0, double tolerance, int max_iter);

// Multistart maximization over the class orbit; start s draws its initial
// point from a generator seeded by (rng_seed, s), so results are identical
// for any thread count and monotone in n_starts.
GammaEstimate gamma_numeric(const IdTable& id, const StateClass& cls, int n_starts,
                            std::uint64_t rng_seed, bool parallel = true,
                            double tolerance = 1e-7, int max_iter = 2000);

// gamma_numeric for every class, in catalog order.
std::vector<GammaEstimate> gamma_table(const IdTable& id, const std::vector<StateClass>& catalog,
                                       int n_starts, std::uint64_t rng_seed, bool parallel = true);

// The 23 four-qubit classes of the reference tables: the full product class,
// the six psi-psi-Bell splits, the three Bell-pair pairings, one-qubit-factored
// GHZ3/W3 on every position, GHZ4, W4, and the three cluster orientations.
std::vector<StateClass> default_catalog_n4();

// Deterministic per-start substream seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace idcert
