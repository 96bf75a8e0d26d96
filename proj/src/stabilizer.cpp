#include "idcert/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace idcert {

namespace {

// GF(2) row basis over concatenated (z,x) vectors with combination tracking.
class Gf2Basis {
 public:
  // Returns true if op was independent (and absorbs it); otherwise fills
  // *combination with the index mask of previously inserted ops reproducing it.
  bool insert(const PauliOperator& op, std::uint64_t* combination = nullptr) {
    std::uint64_t x = op.x, z = op.z, comb = 0;
    for (const auto& r : rows_) {
      if (leading_bit_set(x, z, r.pivot_z, r.pivot_bit)) {
        x ^= r.x;
        z ^= r.z;
        comb ^= r.comb;
      }
    }
    if (x == 0 && z == 0) {
      if (combination) *combination = comb;
      return false;
    }
    Row row{x, z, comb | (1ull << count_), false, 0};
    if (z != 0) {
      row.pivot_z = true;
      row.pivot_bit = 63 - std::countl_zero(z);
    } else {
      row.pivot_z = false;
      row.pivot_bit = 63 - std::countl_zero(x);
    }
    // Keep rows reduced against the new pivot so lookups stay single-pass.
    for (auto& r : rows_) {
      if (leading_bit_set(r.x, r.z, row.pivot_z, row.pivot_bit)) {
        r.x ^= row.x;
        r.z ^= row.z;
        r.comb ^= row.comb;
      }
    }
    rows_.push_back(row);
    ++count_;
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  struct Row {
    std::uint64_t x, z, comb;
    bool pivot_z;
    int pivot_bit;
  };

  static bool leading_bit_set(std::uint64_t x, std::uint64_t z, bool pivot_z, int bit) {
    return ((pivot_z ? z : x) >> bit) & 1;
  }

  std::vector<Row> rows_;
  int count_ = 0;
};

PauliOperator identity_op(int n) { return PauliOperator{n, 0, 0, 0}; }

}  // namespace

int gf2_rank(const std::vector<PauliOperator>& ops) {
  Gf2Basis basis;
  for (const auto& op : ops) basis.insert(op);
  return basis.rank();
}

std::vector<PauliOperator> StabilizerGroup::nonidentity_elements() const {
  std::vector<PauliOperator> out;
  for (const auto& e : elements)
    if (!is_identity_letters(e)) out.push_back(e);
  return out;
}

std::vector<PauliOperator> graph_generators(const std::vector<std::vector<int>>& adjacency) {
  // Validation happens via make_graph_state's rules; re-check the essentials.
  const int n = static_cast<int>(adjacency.size());
  if (n < 1 || n > 64) throw InputError("bad graph size");
  std::vector<PauliOperator> gens;
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(adjacency[a].size()) != n || adjacency[a][a] != 0) {
      throw InputError("adjacency matrix must be square with zero diagonal");
    }
    PauliOperator g;
    g.n = n;
    g.x = 1ull << a;
    for (int b = 0; b < n; ++b) {
      if (adjacency[a][b] != adjacency[b][a]) throw InputError("adjacency matrix must be symmetric");
      if (adjacency[a][b]) g.z |= 1ull << b;
    }
    g.z &= ~g.x;  // neighbours only; diagonal is zero anyway
    g.phase_exp = y_count(g) % 4;
    gens.push_back(g);
  }
  return gens;
}

std::optional<std::vector<PauliOperator>> canonical_generators(const std::string& name, int n) {
  std::vector<std::string> strs;
  if (name == "ghz") {
    for (int i = 1; i < n; ++i) {
      std::string s(n, 'I');
      s[i - 1] = s[i] = 'Z';
      strs.push_back(s);
    }
    strs.push_back(std::string(n, 'X'));
  } else if (name == "c_lin" && n == 4) {
    strs = {"ZZII", "IIZZ", "IZXX", "XXZI"};
  } else if (name == "c_shear" && n == 4) {
    strs = {"ZIZI", "IZIZ", "IXZX", "XZXI"};
  } else if (name == "c_z" && n == 4) {
    strs = {"ZIIZ", "IZZI", "IXXZ", "XZIX"};
  } else {
    return std::nullopt;
  }
  std::vector<PauliOperator> gens;
  for (const auto& s : strs) gens.push_back(parse_pauli(s));
  return gens;
}

StabilizerGroup group_from_generators(const std::vector<PauliOperator>& gens) {
  if (gens.empty()) throw InputError("no generators given");
  const int n = gens[0].n;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].n != n) throw InputError("generators have mixed widths");
    if (!is_hermitian(gens[i])) {
      throw InputError("generator " + std::to_string(i + 1) + " is not Hermitian");
    }
    if (is_identity_letters(gens[i])) {
      if (hermitian_sign(gens[i]) < 0) throw InputError("generators produce -I");
      throw InputError("dependent generators: generator " + std::to_string(i + 1) +
                       " is the identity");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(gens[i], gens[j])) {
        throw InputError("generators " + std::to_string(j + 1) + " and " +
                         std::to_string(i + 1) + " anticommute");
      }
    }
  }
  Gf2Basis basis;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::uint64_t comb = 0;
    if (!basis.insert(gens[i], &comb)) {
      PauliOperator prod = identity_op(n);
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (comb >> j & 1) prod = multiply(prod, gens[j]);
      if (hermitian_sign(prod) != hermitian_sign(gens[i])) {
        throw InputError("generators produce -I (generator " + std::to_string(i + 1) +
                         " contradicts the sign of a product of earlier ones)");
      }
      throw InputError("dependent generators: generator " + std::to_string(i + 1) +
                       " is a product of earlier ones");
    }
  }
  StabilizerGroup g;
  g.n = n;
  g.generators = gens;
  const std::size_t k = gens.size();
  g.elements.reserve(1ull << k);
  for (std::uint64_t sel = 0; sel < (1ull << k); ++sel) {
    PauliOperator e = identity_op(n);
    for (std::size_t j = 0; j < k; ++j)
      if (sel >> j & 1) e = multiply(e, gens[j]);
    g.elements.push_back(e);
  }
  std::sort(g.elements.begin(), g.elements.end(), canonical_less);
  return g;
}

StabilizerGroup state_stabilizer(const QuantumState& state) {
  if (state.n > 6) throw InputError("stabilizer screening is limited to 6 qubits");
  const std::uint64_t d = 1ull << state.n;
  std::vector<PauliOperator> found;
  for (std::uint64_t x = 0; x < d; ++x) {
    for (std::uint64_t z = 0; z < d; ++z) {
      PauliOperator p{state.n, x, z, 0};
      p.phase_exp = y_count(p) % 4;
      const double e = expectation(state, p);
      if (std::abs(e - 1.0) < kTolInput) {
        found.push_back(p);
      } else if (std::abs(e + 1.0) < kTolInput) {
        p.phase_exp = (p.phase_exp + 2) % 4;
        found.push_back(p);
      }
    }
  }
  if (found.size() != d) {
    throw InputError("state is not a stabilizer state (found " +
                     std::to_string(found.size()) + " of " + std::to_string(d) +
                     " stabilizing Paulis)");
  }
  std::sort(found.begin(), found.end(), canonical_less);
  Gf2Basis basis;
  std::vector<PauliOperator> gens;
  for (const auto& e : found) {
    if (is_identity_letters(e)) continue;
    if (basis.insert(e)) gens.push_back(e);
  }
  return group_from_generators(gens);
}

EigenprojectorResult joint_eigenprojector(const std::vector<PauliOperator>& rows,
                                          const std::vector<int>& lambdas) {
  if (rows.empty()) throw InputError("no observables given");
  if (rows.size() != lambdas.size()) throw InputError("one eigenvalue per observable required");
  const int n = rows[0].n;
  if (n > 10) throw InputError("eigenprojector limited to 10 qubits");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n != n) throw InputError("observables have mixed widths");
    if (!is_hermitian(rows[i])) throw InputError("observable " + std::to_string(i + 1) + " is not Hermitian");
    if (lambdas[i] != 1 && lambdas[i] != -1) throw InputError("eigenvalues must be +/-1");
    for (std::size_t j = 0; j < i; ++j)
      if (!commutes(rows[i], rows[j]))
        throw InputError("observables " + std::to_string(j + 1) + " and " +
                         std::to_string(i + 1) + " do not commute");
  }
  const Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(d, d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    proj = 0.5 * (proj + double(lambdas[i]) * (dense_matrix(rows[i]) * proj));
  }
  const double tr = proj.trace().real();
  const int rank = static_cast<int>(std::llround(tr));
  if (rank == 0) {
    throw InputError("empty eigenspace: the eigenvalue assignment is inconsistent "
                     "with the observables' product sign");
  }
  EigenprojectorResult out;
  out.rank = rank;
  out.state = make_mixed(n, proj / tr);
  if (rank == 1) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < d; ++j)
      if (proj(j, j).real() > proj(best, best).real()) best = j;
    Eigen::VectorXcd v = proj.col(best) / std::sqrt(proj(best, best).real());
    Eigen::Index big = 0;
    for (Eigen::Index j = 1; j < d; ++j)
      if (std::abs(v(j)) > std::abs(v(big))) big = j;
    v *= std::polar(1.0, -std::arg(v(big)));
    out.pure = make_pure(n, v);
  }
  return out;
}

}  // namespace idcert
