#include "idcert/gamma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace idcert {

namespace {

Eigen::Matrix2cd euler_zyz(double a, double b, double c) {
  const double cb = std::cos(b / 2), sb = std::sin(b / 2);
  Eigen::Matrix2cd u;
  u << cb * std::polar(1.0, -(a + c) / 2), -sb * std::polar(1.0, -(a - c) / 2),
       sb * std::polar(1.0, (a - c) / 2),  cb * std::polar(1.0, (a + c) / 2);
  return u;
}

// Precompiled row data for fast objective evaluation in index space.
struct RowKernel {
  std::uint64_t x = 0, z = 0;
};

struct Objective {
  int n = 0;
  Eigen::VectorXcd seed;
  std::vector<RowKernel> rows;

  double operator()(const std::vector<double>& params) const {
    const Eigen::Index d = Eigen::Index(1) << n;
    Eigen::VectorXcd a = seed;
    for (int q = 1; q <= n; ++q) {
      const Eigen::Matrix2cd u =
          euler_zyz(params[3 * (q - 1)], params[3 * (q - 1) + 1], params[3 * (q - 1) + 2]);
      const Eigen::Index bit = Eigen::Index(1) << (n - q);
      for (Eigen::Index j = 0; j < d; ++j) {
        if (j & bit) continue;
        const Complex a0 = a(j), a1 = a(j | bit);
        a(j) = u(0, 0) * a0 + u(0, 1) * a1;
        a(j | bit) = u(1, 0) * a0 + u(1, 1) * a1;
      }
    }
    double total = 0;
    for (const auto& r : rows) {
      Complex acc = 0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double s = (std::popcount(std::uint64_t(j) & r.z) % 2) ? -1.0 : 1.0;
        acc += std::conj(a(Eigen::Index(std::uint64_t(j) ^ r.x))) * s * a(j);
      }
      // acc is <X^x Z^z>; the Hermitian row differs by i^y_count, so for
      // odd-y rows acc is purely imaginary. The modulus is |<O>| either way.
      total += std::abs(acc);
    }
    return total;
  }
};

Objective build_objective(const IdTable& id, const QuantumState& seed) {
  if (!seed.pure) throw InputError("class seeds must be pure states");
  if (seed.n != id.n()) throw InputError("class seed width does not match the ID");
  Objective obj;
  obj.n = seed.n;
  obj.seed = seed.amps;
  for (const auto& row : id.rows) {
    // abs() makes row signs and lambdas irrelevant; keep structural masks.
    RowKernel k;
    k.x = to_index_mask(row.n, row.x);
    k.z = to_index_mask(row.n, row.z);
    obj.rows.push_back(k);
  }
  return obj;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of the (seed, index) pair.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

QuantumState lu_orbit_state(const QuantumState& seed, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != 3 * seed.n) {
    throw InputError("expected 3 Euler angles per qubit");
  }
  for (double p : params)
    if (!std::isfinite(p)) throw InputError("non-finite Euler angle");
  std::vector<Eigen::Matrix2cd> us;
  for (int q = 0; q < seed.n; ++q)
    us.push_back(euler_zyz(params[3 * q], params[3 * q + 1], params[3 * q + 2]));
  return apply_local_unitaries(seed, us);
}

double gamma_objective(const IdTable& id, const QuantumState& seed,
                       const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != 3 * seed.n) {
    throw InputError("expected 3 Euler angles per qubit");
  }
  return build_objective(id, seed)(params);
}

NelderMeadResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& objective,
                                 const std::vector<double>& x0, double tolerance, int max_iter) {
  const int dim = static_cast<int>(x0.size());
  if (dim == 0) throw InputError("empty start point");
  auto eval = [&](const std::vector<double>& x) {
    const double v = objective(x);
    if (!std::isfinite(v)) throw InputError("objective returned a non-finite value");
    return v;
  };

  std::vector<std::vector<double>> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  const double step = 0.5;
  for (int i = 1; i <= dim; ++i) xs[i][i - 1] += step;
  for (int i = 0; i <= dim; ++i) fs[i] = eval(xs[i]);

  NelderMeadResult res;
  auto order = [&] {
    std::vector<int> idx(dim + 1);
    for (int i = 0; i <= dim; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] > fs[b]; });
    std::vector<std::vector<double>> xs2;
    std::vector<double> fs2;
    for (int i : idx) {
      xs2.push_back(xs[i]);
      fs2.push_back(fs[i]);
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
  };
  auto diameter = [&] {
    double dmax = 0;
    for (int i = 1; i <= dim; ++i)
      for (int j = 0; j < dim; ++j) dmax = std::max(dmax, std::abs(xs[i][j] - xs[0][j]));
    return dmax;
  };

  order();
  int it = 0;
  for (; it < max_iter; ++it) {
    if (diameter() < tolerance) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) centroid[j] += xs[i][j] / dim;
    auto blend = [&](double t) {
      std::vector<double> x(dim);
      for (int j = 0; j < dim; ++j) x[j] = centroid[j] + t * (centroid[j] - xs[dim][j]);
      return x;
    };
    const std::vector<double> xr = blend(1.0);
    const double fr = eval(xr);
    if (fr > fs[0]) {
      const std::vector<double> xe = blend(2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        xs[dim] = xe;
        fs[dim] = fe;
      } else {
        xs[dim] = xr;
        fs[dim] = fr;
      }
    } else if (fr > fs[dim - 1]) {
      xs[dim] = xr;
      fs[dim] = fr;
    } else {
      const bool outside = fr > fs[dim];
      const std::vector<double> xc = blend(outside ? 0.5 : -0.5);
      const double fc = eval(xc);
      if (fc > (outside ? fr : fs[dim])) {
        xs[dim] = xc;
        fs[dim] = fc;
      } else {
        for (int i = 1; i <= dim; ++i) {
          for (int j = 0; j < dim; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = eval(xs[i]);
        }
      }
    }
    order();
  }
  res.x = xs[0];
  res.value = fs[0];
  res.iterations = it;
  return res;
}

namespace {

struct StartResult {
  double value = -1;
  int index = 0;
  bool converged = false;
  std::vector<double> params;
};

StartResult run_start(const Objective& obj, int dim, std::uint64_t rng_seed, int start,
                      double tolerance, int max_iter) {
  std::mt19937_64 rng(mix_seed(rng_seed, std::uint64_t(start)));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> x0(dim);
  for (double& v : x0) v = angle(rng);
  const NelderMeadResult nm =
      nelder_mead_max([&](const std::vector<double>& x) { return obj(x); }, x0, tolerance, max_iter);
  return StartResult{nm.value, start, nm.converged, nm.x};
}

// Deterministic reduction: higher value wins, ties break to the lowest index.
bool better(const StartResult& a, const StartResult& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

}  // namespace

GammaEstimate gamma_numeric(const IdTable& id, const StateClass& cls, int n_starts,
                            std::uint64_t rng_seed, bool parallel, double tolerance,
                            int max_iter) {
  if (n_starts < 1) throw InputError("need at least one start");
  check_id(id);
  const Objective obj = build_objective(id, cls.seed);
  const int dim = 3 * cls.seed.n;

  StartResult best;
  int converged = 0;
  if (parallel) {
#pragma omp parallel
    {
      StartResult local;
      int local_conv = 0;
#pragma omp for schedule(dynamic) nowait
      for (int s = 0; s < n_starts; ++s) {
        StartResult r = run_start(obj, dim, rng_seed, s, tolerance, max_iter);
        if (r.converged) ++local_conv;
        if (better(r, local)) local = std::move(r);
      }
#pragma omp critical
      {
        converged += local_conv;
        if (better(local, best)) best = std::move(local);
      }
    }
  } else {
    for (int s = 0; s < n_starts; ++s) {
      StartResult r = run_start(obj, dim, rng_seed, s, tolerance, max_iter);
      if (r.converged) ++converged;
      if (better(r, best)) best = std::move(r);
    }
  }

  GammaEstimate est;
  est.class_label = cls.label;
  est.value = best.value;
  est.best_parameters = best.params;
  est.n_starts = n_starts;
  est.n_converged = converged;
  return est;
}

std::vector<GammaEstimate> gamma_table(const IdTable& id, const std::vector<StateClass>& catalog,
                                       int n_starts, std::uint64_t rng_seed, bool parallel) {
  std::vector<GammaEstimate> out;
  for (const auto& cls : catalog) out.push_back(gamma_numeric(id, cls, n_starts, rng_seed, parallel));
  return out;
}

namespace {

// One tensor factor of a catalog seed on an ordered qubit list.
struct Factor {
  std::vector<int> qubits;
  std::string type;  // "zero", "bell", "ghz", "w"
};

QuantumState seed_from_factors(int n, const std::vector<Factor>& factors) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXcd amps(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double a = 1.0;
    for (const auto& f : factors) {
      int sub = 0;
      for (std::size_t i = 0; i < f.qubits.size(); ++i)
        if (j >> (n - f.qubits[i]) & 1) sub |= 1 << (f.qubits.size() - 1 - i);
      const int w = std::popcount(unsigned(sub));
      const int nf = static_cast<int>(f.qubits.size());
      if (f.type == "zero") {
        a *= (sub == 0) ? 1.0 : 0.0;
      } else if (f.type == "bell") {
        a *= (sub == 0 || sub == 3) ? 1.0 / std::numbers::sqrt2 : 0.0;
      } else if (f.type == "ghz") {
        a *= (sub == 0 || sub == (1 << nf) - 1) ? 1.0 / std::numbers::sqrt2 : 0.0;
      } else {  // "w"
        a *= (w == 1) ? 1.0 / std::sqrt(double(nf)) : 0.0;
      }
      if (a == 0.0) break;
    }
    amps(j) = a;
  }
  return make_pure(n, amps);
}

std::vector<int> others(int n, int skip) {
  std::vector<int> qs;
  for (int q = 1; q <= n; ++q)
    if (q != skip) qs.push_back(q);
  return qs;
}

}  // namespace

std::vector<StateClass> default_catalog_n4() {
  std::vector<StateClass> cat;
  auto add = [&](std::string label, QuantumState seed) {
    cat.push_back({std::move(label), std::move(seed)});
  };
  add("product", seed_from_factors(4, {{{1, 2, 3, 4}, "zero"}}));
  const int pairs[6][4] = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3},
                           {2, 3, 1, 4}, {2, 4, 1, 3}, {3, 4, 1, 2}};
  for (const auto& p : pairs) {
    add("psi" + std::to_string(p[0]) + "_psi" + std::to_string(p[1]) + "_Phi" +
            std::to_string(p[2]) + std::to_string(p[3]),
        seed_from_factors(4, {{{p[0]}, "zero"}, {{p[1]}, "zero"}, {{p[2], p[3]}, "bell"}}));
  }
  add("Phi12_Phi34", seed_from_factors(4, {{{1, 2}, "bell"}, {{3, 4}, "bell"}}));
  add("Phi13_Phi24", seed_from_factors(4, {{{1, 3}, "bell"}, {{2, 4}, "bell"}}));
  add("Phi14_Phi23", seed_from_factors(4, {{{1, 4}, "bell"}, {{2, 3}, "bell"}}));
  for (int q = 1; q <= 4; ++q) {
    const auto rest = others(4, q);
    std::string suffix;
    for (int r : rest) suffix += std::to_string(r);
    add("psi" + std::to_string(q) + "_GHZ" + suffix,
        seed_from_factors(4, {{{q}, "zero"}, {rest, "ghz"}}));
  }
  for (int q = 1; q <= 4; ++q) {
    const auto rest = others(4, q);
    std::string suffix;
    for (int r : rest) suffix += std::to_string(r);
    add("psi" + std::to_string(q) + "_W" + suffix,
        seed_from_factors(4, {{{q}, "zero"}, {rest, "w"}}));
  }
  add("GHZ1234", make_ghz(4));
  add("W1234", make_w(4));
  add("C_shear", make_c_shear());
  add("C_z", make_c_z());
  add("C_lin", make_c_lin());
  return cat;
}

}  // namespace idcert
