#include "idcert/certification.hpp"

#include <algorithm>
#include <cmath>

namespace idcert {

namespace {

double quadrature(const std::vector<Measured>& ms) {
  double s = 0;
  for (const auto& m : ms) s += m.sigma * m.sigma;
  return std::sqrt(s);
}

FidelityBound make_bound(std::string method, double value, double sigma,
                         bool subspace_only = false) {
  FidelityBound b;
  b.method = std::move(method);
  b.value = value;
  b.clamped = std::clamp(value, 0.0, 1.0);
  b.sigma = sigma;
  b.subspace_only = subspace_only;
  return b;
}

}  // namespace

double lhvt_bound(const IdTable& id) {
  const IdClassification c = check_id(id);
  if (!c.whole) throw InputError("LHVT bound M-2 requires a whole ID");
  if (c.sign >= 0) throw InputError("LHVT bound M-2 requires a negative ID");
  return double(c.m - 2);
}

double lhvt_max_bruteforce(const IdTable& id, bool parallel) {
  const IdClassification c = check_id(id);
  const int n = c.n;
  if (n > 5) throw InputError("LHVT brute force limited to 5 qubits");
  const int m = c.m;
  // Effective sign per row: the lambda times any sign embedded in the row.
  std::vector<int> eff(m);
  for (int i = 0; i < m; ++i) eff[i] = id.lambda(i) * hermitian_sign(id.rows[i]);

  // Assignment v packs one bit per (qubit, letter): bit 3(q-1)+l, l in
  // {0:X, 1:Y, 2:Z}; bit set means value -1.
  const std::uint64_t total = 1ull << (3 * n);
  auto alpha_of = [&](std::uint64_t v) {
    int alpha = 0;
    for (int i = 0; i < m; ++i) {
      int val = eff[i];
      for (int q = 1; q <= n; ++q) {
        const char letter = pauli_letter(id.rows[i], q);
        if (letter == 'I') continue;
        const int l = letter == 'X' ? 0 : letter == 'Y' ? 1 : 2;
        if (v >> (3 * (q - 1) + l) & 1) val = -val;
      }
      alpha += val;
    }
    return alpha;
  };

  int best = -m;
  if (parallel) {
#pragma omp parallel for reduction(max : best) schedule(static)
    for (long long v = 0; v < (long long)total; ++v)
      best = std::max(best, alpha_of((std::uint64_t)v));
  } else {
    for (std::uint64_t v = 0; v < total; ++v) best = std::max(best, alpha_of(v));
  }
  return double(best);
}

BellResult bell_parameter(const IdTable& id, const std::vector<Measured>& per_row) {
  if (per_row.size() != id.rows.size()) throw InputError("one measurement per row required");
  BellResult r;
  r.alpha_lhvt = lhvt_bound(id);
  r.alpha_qm = double(id.m());
  r.alpha_exp = 0;
  for (int i = 0; i < id.m(); ++i) r.alpha_exp += id.lambda(i) * per_row[i].value;
  r.sigma = quadrature(per_row);
  r.violation_sigmas = r.sigma > 0 ? (r.alpha_exp - r.alpha_lhvt) / r.sigma : 0;
  return r;
}

FidelityBound fidelity_bound_id(double alpha_exp, int m, double sigma, int r) {
  if (m < 2) throw InputError("ID size must be at least 2");
  if (r < 1) throw InputError("eigenspace rank must be positive");
  return make_bound("ID", (alpha_exp - double(m) + 4.0) / 4.0, sigma / 4.0, r > 1);
}

FidelityBound fidelity_bound_gosg(const std::vector<Measured>& generators, int n) {
  if (static_cast<int>(generators.size()) != n) {
    throw InputError("GoSG bound needs exactly n generator expectations");
  }
  double s = 0;
  for (const auto& g : generators) s += g.value;
  return make_bound("GoSG", (s - double(n) + 2.0) / 2.0, quadrature(generators) / 2.0);
}

FidelityBound fidelity_sg(const std::vector<Measured>& elements, int n) {
  if (elements.size() != (std::size_t(1) << n)) {
    throw InputError("SG fidelity needs all 2^n signed element expectations");
  }
  double s = 0;
  for (const auto& e : elements) s += e.value;
  const double scale = std::pow(2.0, -n);
  return make_bound("SG", s * scale, quadrature(elements) * scale);
}

IdGosgComparison compare_id_gosg(const std::vector<double>& a, int n) {
  if (static_cast<int>(a.size()) != n + 1) {
    throw InputError("comparison requires M = N+1 row values");
  }
  const int m = n + 1;
  double sum = 0;
  for (double v : a) sum += v;
  IdGosgComparison out;
  out.f_id = (sum - double(m) + 4.0) / 4.0;
  out.best = out.f_id;
  for (int skip = 0; skip < m; ++skip) {
    const double g = ((sum - a[skip]) - double(n) + 2.0) / 2.0;
    out.f_gosg.push_back(g);
    out.best = std::max(out.best, g);
  }
  out.difference = out.f_id - out.f_gosg.back();
  return out;
}

WitnessBound witness_gamma_analytic(const IdTable& id, const QuantumState& kappa0) {
  const IdClassification c = check_id(id);
  if (c.r != 1) {
    throw InputError("analytic witness bound requires a nondegenerate ID eigenspace (r = " +
                     std::to_string(c.r) + ")");
  }
  if (!kappa0.pure) throw InputError("analytic witness bound requires the pure eigenstate");
  if (kappa0.n != c.n) throw InputError("eigenstate width does not match the ID");
  WitnessBound w;
  w.class_label = "biseparable";
  w.source = "analytic_bipartition";
  const std::uint64_t full = (1ull << c.n) - 1;
  for (std::uint64_t mask = 1; mask < full; mask += 2) {
    const SchmidtSpectrum sp = schmidt_spectrum(kappa0, {c.n, mask});
    BipartitionBeta b;
    b.mask = mask;
    b.max_schmidt_sq = sp.max_coeff_sq();
    b.beta = double(c.m) - 4.0 + 4.0 * b.max_schmidt_sq;
    w.betas.push_back(b);
  }
  w.gamma = 0;
  for (const auto& b : w.betas) w.gamma = std::max(w.gamma, b.beta);
  return w;
}

double witness_value(double gamma, double alpha_exp) { return gamma - alpha_exp; }

double witness_fidelity_relation(double gamma, double witness, int m) {
  return (gamma - witness - double(m) + 4.0) / 4.0;
}

NoiseTolerance noise_tolerance(int m, double gamma, int r) {
  if (m < 2) throw InputError("ID size must be at least 2");
  if (r < 1) throw InputError("eigenspace rank must be positive");
  if (gamma < 0 || gamma > double(m)) throw InputError("gamma must lie in [0, M]");
  NoiseTolerance t;
  t.m = m;
  t.gamma = gamma;
  t.r = r;
  const double num = double(r) * (double(m) - gamma);
  t.p_max = num + gamma > 0 ? num / (num + gamma) : 0.0;
  return t;
}

MinNonlocalFidelity min_nonlocal_fidelity() {
  MinNonlocalFidelity f;
  f.value = 0.5;
  f.derivation =
      "Any Bell violation needs <alpha> > M-2; with F_ID = (<alpha> - M + 4)/4 "
      "this forces F_ID > (M - 2 - M + 4)/4 = 1/2, so certifying nonlocality "
      "through an ID implies at least 50% fidelity with the target eigenstate.";
  return f;
}

}  // namespace idcert
