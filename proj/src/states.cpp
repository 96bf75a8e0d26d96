#include "idcert/states.hpp"

#include <bit>
#include <cmath>

namespace idcert {

namespace {

constexpr int kMaxQubits = 10;

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw InputError("qubit count " + std::to_string(n) + " outside 1.." +
                     std::to_string(kMaxQubits));
  }
}

void check_width(const QuantumState& s, const PauliOperator& p) {
  if (s.n != p.n) {
    throw InputError("state has " + std::to_string(s.n) + " qubits but operator has " +
                     std::to_string(p.n));
  }
}

Complex i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

std::uint64_t to_index_mask(int n, std::uint64_t qubit_mask) {
  std::uint64_t m = 0;
  for (int q = 1; q <= n; ++q)
    if (qubit_mask >> (q - 1) & 1) m |= 1ull << (n - q);
  return m;
}

QuantumState make_pure(int n, Eigen::VectorXcd amps) {
  check_qubits(n);
  if (amps.size() != (Eigen::Index(1) << n)) {
    throw InputError("amplitude vector has " + std::to_string(amps.size()) +
                     " entries, expected " + std::to_string(1ll << n));
  }
  const double norm = amps.norm();
  if (norm < kTolExact) throw InputError("zero state vector");
  QuantumState s;
  s.n = n;
  s.pure = true;
  s.amps = amps / norm;
  return s;
}

QuantumState make_mixed(int n, Eigen::MatrixXcd rho) {
  check_qubits(n);
  const Eigen::Index d = Eigen::Index(1) << n;
  if (rho.rows() != d || rho.cols() != d) throw InputError("density matrix has wrong shape");
  QuantumState s;
  s.n = n;
  s.pure = false;
  s.rho = std::move(rho);
  return s;
}

QuantumState make_ghz(int n) {
  check_qubits(n);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  a(0) = a(a.size() - 1) = 1.0 / std::sqrt(2.0);
  return make_pure(n, a);
}

QuantumState make_w(int n) {
  check_qubits(n);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  for (int q = 1; q <= n; ++q) a(Eigen::Index(1) << (n - q)) = 1.0 / std::sqrt(double(n));
  return make_pure(n, a);
}

namespace {
QuantumState four_qubit_cluster(int i1, int i2, int i3) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(16);
  a(0) = a(i1) = a(i2) = 0.5;
  a(i3) = -0.5;
  return make_pure(4, a);
}
}  // namespace

QuantumState make_c_lin() { return four_qubit_cluster(0b0011, 0b1100, 0b1111); }
QuantumState make_c_shear() { return four_qubit_cluster(0b0101, 0b1010, 0b1111); }
QuantumState make_c_z() { return four_qubit_cluster(0b0110, 0b1001, 0b1111); }

QuantumState make_basis(const std::string& bits) {
  const int n = static_cast<int>(bits.size());
  check_qubits(n);
  Eigen::Index idx = 0;
  for (int q = 1; q <= n; ++q) {
    const char c = bits[q - 1];
    if (c != '0' && c != '1') {
      throw InputError(std::string("invalid basis bit '") + c + "' at position " +
                       std::to_string(q));
    }
    if (c == '1') idx |= Eigen::Index(1) << (n - q);
  }
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  a(idx) = 1.0;
  return make_pure(n, a);
}

QuantumState make_bell_product(int n, const std::vector<std::pair<int, int>>& pairs) {
  check_qubits(n);
  std::uint64_t seen = 0;
  for (auto [a, b] : pairs) {
    if (a < 1 || a > n || b < 1 || b > n || a == b) throw InputError("invalid qubit pair");
    const std::uint64_t m = (1ull << (a - 1)) | (1ull << (b - 1));
    if (seen & m) throw InputError("qubit appears in two pairs");
    seen |= m;
  }
  if (std::popcount(seen) != n) throw InputError("pairs must cover every qubit exactly once");
  const Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d);
  const double val = std::pow(2.0, -0.5 * double(pairs.size()));
  for (Eigen::Index j = 0; j < d; ++j) {
    bool ok = true;
    for (auto [a, b] : pairs) {
      const int ba = int(j >> (n - a)) & 1, bb = int(j >> (n - b)) & 1;
      if (ba != bb) { ok = false; break; }
    }
    if (ok) amps(j) = val;
  }
  return make_pure(n, amps);
}

QuantumState make_graph_state(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  check_qubits(n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(adjacency[a].size()) != n) throw InputError("adjacency matrix is not square");
    if (adjacency[a][a] != 0) throw InputError("adjacency matrix must have a zero diagonal");
    for (int b = 0; b < n; ++b) {
      if (adjacency[a][b] != adjacency[b][a]) throw InputError("adjacency matrix must be symmetric");
      if (adjacency[a][b] != 0 && adjacency[a][b] != 1) throw InputError("adjacency entries must be 0/1");
    }
  }
  const Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXcd amps(d);
  const double val = std::pow(2.0, -0.5 * double(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    int edges = 0;
    for (int a = 0; a < n; ++a) {
      if (!(j >> (n - 1 - a) & 1)) continue;
      for (int b = a + 1; b < n; ++b)
        if ((j >> (n - 1 - b) & 1) && adjacency[a][b]) ++edges;
    }
    amps(j) = (edges % 2 == 0) ? val : -val;
  }
  return make_pure(n, amps);
}

QuantumState make_named_state(const std::string& name, int n) {
  if (name == "ghz") return make_ghz(n);
  if (name == "w") return make_w(n);
  if (name == "c_lin" || name == "c_shear" || name == "c_z") {
    if (n != 4) {
      throw InputError(name + " is a 4-qubit state, not " + std::to_string(n) + "-qubit");
    }
    if (name == "c_lin") return make_c_lin();
    if (name == "c_shear") return make_c_shear();
    return make_c_z();
  }
  throw InputError("unknown state name '" + name + "'");
}

double expectation(const QuantumState& state, const PauliOperator& obs) {
  check_width(state, obs);
  if (!is_hermitian(obs)) throw InputError("expectation of a non-Hermitian operator");
  const std::uint64_t xi = to_index_mask(obs.n, obs.x);
  const std::uint64_t zi = to_index_mask(obs.n, obs.z);
  const Complex phase = i_power(obs.phase_exp);
  Complex acc = 0;
  const Eigen::Index d = state.dim();
  if (state.pure) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = (std::popcount(std::uint64_t(j) & zi) % 2) ? -1.0 : 1.0;
      acc += std::conj(state.amps(Eigen::Index(std::uint64_t(j) ^ xi))) * s * state.amps(j);
    }
  } else {
    for (Eigen::Index m = 0; m < d; ++m) {
      const double s = (std::popcount(std::uint64_t(m) & zi) % 2) ? -1.0 : 1.0;
      acc += s * state.rho(m, Eigen::Index(std::uint64_t(m) ^ xi));
    }
  }
  acc *= phase;
  if (std::abs(acc.imag()) > kTolExact) {
    throw InputError("expectation has a nonzero imaginary part (" +
                     std::to_string(acc.imag()) + ")");
  }
  return acc.real();
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.n != b.n) throw InputError("fidelity of states with different widths");
  if (a.pure && b.pure) return std::norm(a.amps.dot(b.amps));
  if (a.pure) return std::real(a.amps.dot(b.rho * a.amps));
  if (b.pure) return std::real(b.amps.dot(a.rho * b.amps));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.rho);
  const Eigen::MatrixXcd sqrt_a =
      es.eigenvectors() *
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(sqrt_a * b.rho * sqrt_a);
  // Eigensolver noise of order eps enters the trace as sqrt(eps); drop it.
  const Eigen::ArrayXd vals = es2.eigenvalues().array().max(0.0);
  const double cutoff = vals.maxCoeff() * 1e-12;
  double tr = 0.0;
  for (Eigen::Index j = 0; j < vals.size(); ++j)
    if (vals(j) > cutoff) tr += std::sqrt(vals(j));
  return tr * tr;
}

SchmidtSpectrum schmidt_spectrum(const QuantumState& state, const QubitSubset& subset) {
  if (!state.pure) throw InputError("Schmidt spectrum requires a pure state");
  if (subset.n != state.n) throw InputError("subset register width does not match state");
  if (subset.empty()) throw InputError("Schmidt bipartition must be nonempty");
  if (subset.full()) throw InputError("Schmidt bipartition must be a proper subset");
  const auto qa = subset.qubits();
  std::vector<int> qb;
  for (int q = 1; q <= state.n; ++q)
    if (!(subset.mask >> (q - 1) & 1)) qb.push_back(q);
  const Eigen::Index ra = Eigen::Index(1) << qa.size(), rb = Eigen::Index(1) << qb.size();
  Eigen::MatrixXcd m(ra, rb);
  for (Eigen::Index j = 0; j < state.dim(); ++j) {
    Eigen::Index r = 0, c = 0;
    for (std::size_t i = 0; i < qa.size(); ++i)
      if (j >> (state.n - qa[i]) & 1) r |= Eigen::Index(1) << (qa.size() - 1 - i);
    for (std::size_t i = 0; i < qb.size(); ++i)
      if (j >> (state.n - qb[i]) & 1) c |= Eigen::Index(1) << (qb.size() - 1 - i);
    m(r, c) = state.amps(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  SchmidtSpectrum out;
  out.bipartition = subset;
  out.coeffs.assign(svd.singularValues().data(),
                    svd.singularValues().data() + svd.singularValues().size());
  return out;
}

QuantumState depolarize(const QuantumState& state, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("depolarizing strength must lie in [0,1]");
  const Eigen::Index d = state.dim();
  Eigen::MatrixXcd rho =
      state.pure ? Eigen::MatrixXcd(state.amps * state.amps.adjoint()) : state.rho;
  rho = (1.0 - p) * rho +
        (p / double(d)) * Eigen::MatrixXcd::Identity(d, d);
  return make_mixed(state.n, std::move(rho));
}

QuantumState apply_local_unitaries(const QuantumState& state,
                                   const std::vector<Eigen::Matrix2cd>& us) {
  if (static_cast<int>(us.size()) != state.n) {
    throw InputError("expected one unitary per qubit (" + std::to_string(state.n) + ")");
  }
  for (const auto& u : us) {
    if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() > kTolInput) {
      throw InputError("matrix is not unitary within tolerance");
    }
  }
  const Eigen::Index d = state.dim();
  if (state.pure) {
    Eigen::VectorXcd a = state.amps;
    for (int q = 1; q <= state.n; ++q) {
      const Eigen::Index bit = Eigen::Index(1) << (state.n - q);
      const auto& u = us[q - 1];
      for (Eigen::Index j = 0; j < d; ++j) {
        if (j & bit) continue;
        const Complex a0 = a(j), a1 = a(j | bit);
        a(j) = u(0, 0) * a0 + u(0, 1) * a1;
        a(j | bit) = u(1, 0) * a0 + u(1, 1) * a1;
      }
    }
    QuantumState out;
    out.n = state.n;
    out.pure = true;
    out.amps = std::move(a);
    return out;
  }
  // Build u_1 (x) ... (x) u_n; qubit 1 owns the most significant index bit,
  // so it must be the leftmost factor.
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
  for (auto it = us.rbegin(); it != us.rend(); ++it) {
    const auto& u = *it;
    Eigen::MatrixXcd next(full.rows() * 2, full.cols() * 2);
    next << full * u(0, 0), full * u(0, 1), full * u(1, 0), full * u(1, 1);
    full = std::move(next);
  }
  return make_mixed(state.n, full * state.rho * full.adjoint());
}

Eigen::MatrixXcd dense_matrix(const PauliOperator& p) {
  if (p.n > 10) throw InputError("dense matrix limited to 10 qubits");
  static const Complex i{0, 1};
  Eigen::Matrix2cd mats[4];
  mats[0] << 1, 0, 0, 1;        // I
  mats[1] << 0, 1, 1, 0;        // X
  mats[2] << 0, -i, i, 0;       // Y
  mats[3] << 1, 0, 0, -1;       // Z
  // Kron with qubit 1 as the leftmost factor (most significant index bit).
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = p.n; q >= 1; --q) {
    const char c = pauli_letter(p, q);
    const auto& u = mats[c == 'I' ? 0 : c == 'X' ? 1 : c == 'Y' ? 2 : 3];
    Eigen::MatrixXcd next(full.rows() * 2, full.cols() * 2);
    next << full * u(0, 0), full * u(0, 1), full * u(1, 0), full * u(1, 1);
    full = std::move(next);
  }
  // Residual phase beyond the letters' own i factors (sign or +/-i).
  return i_power(p.phase_exp - y_count(p)) * full;
}

}  // namespace idcert
