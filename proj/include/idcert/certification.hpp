// ID Bell parameters, fidelity lower bounds, entanglement witnesses, noise tolerance.
#pragma once

#include <string>
#include <vector>

#include "idcert/id_analysis.hpp"

namespace idcert {

// A measured expectation value with its one-sigma uncertainty.
struct Measured {
  double value = 0;
  double sigma = 0;
};

struct BellResult {
  double alpha_qm = 0;          // M
  double alpha_lhvt = 0;        // M-2 for whole negative IDs
  double alpha_exp = 0;
  double sigma = 0;
  double violation_sigmas = 0;  // (alpha_exp - alpha_lhvt) / sigma
};

struct FidelityBound {
  std::string method;        // "ID", "GoSG", "SG", "QST"
  double value = 0;          // unclamped bound
  double clamped = 0;        // value clipped to [0,1]
  double sigma = 0;
  bool subspace_only = false;  // r>1: bounds the eigenspace overlap, not a state fidelity
};

struct BipartitionBeta {
  std::uint64_t mask = 0;  // qubit-mask of one side
  double max_schmidt_sq = 0;
  double beta = 0;  // M - 4 + 4*max_schmidt_sq
};

struct WitnessBound {
  std::string class_label;
  double gamma = 0;
  std::string source;  // "analytic_bipartition" or "numeric"
  std::vector<BipartitionBeta> betas;
};

struct NoiseTolerance {
  int m = 0;
  double gamma = 0;
  int r = 1;
  double p_max = 0;
};

struct IdGosgComparison {
  double f_id = 0;
  std::vector<double> f_gosg;  // one bound per choice of the product row A_M
  double best = 0;             // max over f_id and all f_gosg
  // For the canonical choice (last row as A_M): f_id - f_gosg equals
  // ((a_M - 1) + (N - sum a_n)) / 4; stored for the identity check.
  double difference = 0;
};

struct MinNonlocalFidelity {
  double value = 0.5;
  std::string derivation;
};

// LHVT value bound M-2; errors unless the ID is whole and negative.
double lhvt_bound(const IdTable& id);

// Exact maximum of <alpha> over all 2^{3N} noncontextual +/-1 assignments
// (N <= 5). Serial path is the reference implementation.
double lhvt_max_bruteforce(const IdTable& id, bool parallel = true);

// alpha = sum_i lambda_i <O_i>; sigma by quadrature. Requires a whole negative
// ID (the LHVT bound must exist).
BellResult bell_parameter(const IdTable& id, const std::vector<Measured>& per_row);

FidelityBound fidelity_bound_id(double alpha_exp, int m, double sigma = 0, int r = 1);
FidelityBound fidelity_bound_gosg(const std::vector<Measured>& generators, int n);
// Mean of all 2^n signed stabilizer expectations (the +1 identity included).
FidelityBound fidelity_sg(const std::vector<Measured>& elements, int n);

// a has N+1 entries a_i = lambda_i <O_i> for an ID with M = N+1.
IdGosgComparison compare_id_gosg(const std::vector<double>& a, int n);

// Biseparable-class bound Gamma = max_l (M - 4 + 4 max_m nu_m^2) from the
// Schmidt spectra of the ID's nondegenerate eigenstate. Errors when r > 1.
WitnessBound witness_gamma_analytic(const IdTable& id, const QuantumState& kappa0);

// <W> = gamma - <alpha>.
double witness_value(double gamma, double alpha_exp);

// F_ID = (gamma - <W> - M + 4) / 4.
double witness_fidelity_relation(double gamma, double witness, int m);

NoiseTolerance noise_tolerance(int m, double gamma, int r);

MinNonlocalFidelity min_nonlocal_fidelity();

}  // namespace idcert
