#include "idcert/id_analysis.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace idcert {

namespace {

PauliOperator product_of(const std::vector<PauliOperator>& rows) {
  PauliOperator p{rows[0].n, 0, 0, 0};
  for (const auto& r : rows) p = multiply(p, r);
  return p;
}

// Pairwise commutation and a real +/-I product for a restricted row set.
bool forms_id(const std::vector<PauliOperator>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!commutes(rows[i], rows[j])) return false;
  const PauliOperator p = product_of(rows);
  return is_identity_letters(p) && p.phase_exp % 2 == 0;
}

std::vector<std::string> row_strings(const IdTable& id) {
  std::vector<std::string> out;
  for (const auto& r : id.rows) out.push_back(format_pauli(r));
  return out;
}

}  // namespace

IdTable make_id(std::vector<PauliOperator> rows, std::vector<int> lambdas) {
  IdTable id{std::move(rows), std::move(lambdas)};
  if (!id.lambdas.empty() && id.lambdas.size() != id.rows.size()) {
    throw InputError("one lambda per row required");
  }
  for (int l : id.lambdas)
    if (l != 1 && l != -1) throw InputError("lambdas must be +/-1");
  return id;
}

bool is_whole(const std::vector<PauliOperator>& rows) {
  const int n = rows[0].n;
  for (int q = 1; q <= n; ++q) {
    int cx = 0, cy = 0, cz = 0;
    for (const auto& r : rows) {
      switch (pauli_letter(r, q)) {
        case 'X': ++cx; break;
        case 'Y': ++cy; break;
        case 'Z': ++cz; break;
        default: break;
      }
    }
    if (cx % 2 || cy % 2 || cz % 2) return false;
  }
  return true;
}

bool is_entangled(const std::vector<PauliOperator>& rows) {
  const int n = rows[0].n;
  if (n < 2) return false;
  const std::uint64_t full = (1ull << n) - 1;
  // One side of each bipartition suffices: commutation parities and phase
  // reality agree between the two sides when the whole table is a valid ID.
  for (std::uint64_t mask = 1; mask < full; mask += 2) {
    std::vector<PauliOperator> sub;
    sub.reserve(rows.size());
    for (const auto& r : rows) sub.push_back(restrict(r, {n, mask}));
    if (forms_id(sub)) return false;
  }
  return true;
}

bool is_critical(const std::vector<PauliOperator>& rows) {
  if (!is_entangled(rows)) return false;
  const int m = static_cast<int>(rows.size());
  const int n = rows[0].n;
  // (a) No proper row subset of size >= 2 may multiply to +/-I.
  for (std::uint32_t sel = 1; sel + 1 < (1u << m); ++sel) {
    if (std::popcount(sel) < 2) continue;
    std::uint64_t x = 0, z = 0;
    for (int i = 0; i < m; ++i) {
      if (sel >> i & 1) {
        x ^= rows[i].x;
        z ^= rows[i].z;
      }
    }
    if (x == 0 && z == 0) return false;
  }
  // (b) No column deletion may leave a smaller ID after dropping rows that
  // became the identity.
  const std::uint64_t full = (1ull << n) - 1;
  for (std::uint64_t keep = 1; keep < full; ++keep) {
    std::vector<PauliOperator> survivors;
    for (const auto& r : rows) {
      PauliOperator s = restrict(r, {n, keep});
      if (!is_identity_letters(s)) survivors.push_back(s);
    }
    if (survivors.size() >= 2 && forms_id(survivors)) return false;
  }
  return true;
}

bool assignment_consistent(const IdTable& id) {
  int prod = 1;
  for (int i = 0; i < id.m(); ++i) prod *= id.lambda(i);
  std::vector<PauliOperator> structs;
  for (const auto& r : id.rows) structs.push_back(structural(r));
  const PauliOperator p = product_of(structs);
  return is_identity_letters(p) && prod == hermitian_sign(p);
}

IdClassification check_id(const IdTable& id) {
  if (id.rows.size() < 2) throw InputError("an ID needs at least 2 rows");
  if (!id.lambdas.empty() && id.lambdas.size() != id.rows.size()) {
    throw InputError("one lambda per row required");
  }
  const int n = id.rows[0].n;
  for (std::size_t i = 0; i < id.rows.size(); ++i) {
    const auto& r = id.rows[i];
    if (r.n != n) throw InputError("rows have mixed widths");
    if (!is_hermitian(r)) throw InputError("row " + std::to_string(i + 1) + " is not Hermitian");
    if (is_identity_letters(r)) throw InputError("row " + std::to_string(i + 1) + " is the identity");
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(id.rows[i], id.rows[j])) {
        throw InputError("rows " + std::to_string(j + 1) + " and " +
                         std::to_string(i + 1) + " do not commute");
      }
    }
  }
  const PauliOperator prod = product_of(id.rows);
  if (!is_identity_letters(prod)) throw InputError("the rows do not multiply to +/-identity");

  std::vector<PauliOperator> structs;
  for (const auto& r : id.rows) structs.push_back(structural(r));

  IdClassification c;
  c.m = id.m();
  c.n = n;
  c.sign = hermitian_sign(prod);
  c.whole = is_whole(structs);
  c.entangled = is_entangled(structs);
  c.critical = c.entangled && is_critical(structs);
  c.k = gf2_rank(structs);
  c.r = 1 << (n - c.k);
  c.min_settings = static_cast<int>(min_settings(structs).size());
  return c;
}

namespace {

bool passes(const IdFilters& f, const IdClassification& c, std::uint64_t support,
            std::uint64_t full) {
  if (f.whole && c.whole != *f.whole) return false;
  if (f.negative && (c.sign < 0) != *f.negative) return false;
  if (f.entangled && c.entangled != *f.entangled) return false;
  if (f.critical && c.critical != *f.critical) return false;
  if (f.full_width && support != full) return false;
  return true;
}

}  // namespace

std::vector<IdTable> find_ids_in_group(const StabilizerGroup& group, int m_max,
                                       const IdFilters& filters, bool parallel) {
  if (m_max < 2 || m_max > 8) throw InputError("m_max must lie in 2..8");
  const std::vector<PauliOperator> elems = group.nonidentity_elements();
  const int ne = static_cast<int>(elems.size());
  const std::uint64_t full = (1ull << group.n) - 1;

  std::map<std::pair<std::uint64_t, std::uint64_t>, int> index;
  for (int i = 0; i < ne; ++i) index[{elems[i].x, elems[i].z}] = i;

  // Enumerate (m-1)-subsets i0<...; the last row is forced by the zero-xor
  // constraint and accepted only when its index exceeds the picked ones, so
  // each ID is produced exactly once, already in canonical row order.
  auto collect_from_first = [&](int i0, std::vector<IdTable>& out) {
    std::vector<int> picked{i0};
    auto rec = [&](auto&& self, std::uint64_t x, std::uint64_t z, int need) -> void {
      if (need == 0) {
        const auto it = index.find({x, z});
        if (it == index.end()) return;
        const int last = it->second;
        if (last <= picked.back()) return;
        IdTable id;
        for (int i : picked) {
          id.rows.push_back(structural(elems[i]));
          id.lambdas.push_back(hermitian_sign(elems[i]));
        }
        id.rows.push_back(structural(elems[last]));
        id.lambdas.push_back(hermitian_sign(elems[last]));
        const IdClassification c = check_id(id);
        std::uint64_t support = 0;
        for (const auto& r : id.rows) support |= r.x | r.z;
        if (passes(filters, c, support, full)) out.push_back(std::move(id));
        return;
      }
      for (int i = picked.back() + 1; i + need <= ne; ++i) {
        picked.push_back(i);
        self(self, x ^ elems[i].x, z ^ elems[i].z, need - 1);
        picked.pop_back();
      }
    };
    for (int m = 3; m <= std::min(m_max, ne); ++m) {
      rec(rec, elems[i0].x, elems[i0].z, m - 2);
    }
  };

  std::vector<std::vector<IdTable>> buckets(ne);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i0 = 0; i0 < ne; ++i0) collect_from_first(i0, buckets[i0]);
  } else {
    for (int i0 = 0; i0 < ne; ++i0) collect_from_first(i0, buckets[i0]);
  }

  std::vector<IdTable> out;
  for (auto& b : buckets)
    for (auto& id : b) out.push_back(std::move(id));
  std::stable_sort(out.begin(), out.end(), [](const IdTable& a, const IdTable& b) {
    return row_strings(a) < row_strings(b);
  });
  return out;
}

std::vector<std::string> min_settings(const std::vector<PauliOperator>& rows) {
  if (rows.empty()) return {};
  const int n = rows[0].n;
  std::vector<PauliOperator> universe;
  for (const auto& r : rows) {
    const PauliOperator s = structural(r);
    if (is_identity_letters(s)) continue;
    if (std::find(universe.begin(), universe.end(), s) == universe.end())
      universe.push_back(s);
  }
  if (universe.empty()) return {};

  // Candidate settings: per-column letters that actually occur.
  std::vector<std::string> col_letters(n);
  for (int q = 1; q <= n; ++q) {
    for (const auto& r : universe) {
      const char c = pauli_letter(r, q);
      if (c != 'I' && col_letters[q - 1].find(c) == std::string::npos)
        col_letters[q - 1].push_back(c);
    }
    if (col_letters[q - 1].empty()) col_letters[q - 1] = "Z";
    std::sort(col_letters[q - 1].begin(), col_letters[q - 1].end());
  }
  std::vector<std::string> candidates;
  std::string cur(n, ' ');
  auto gen = [&](auto&& self, int q) -> void {
    if (q > n) {
      candidates.push_back(cur);
      return;
    }
    for (char c : col_letters[q - 1]) {
      cur[q - 1] = c;
      self(self, q + 1);
    }
  };
  gen(gen, 1);

  const int nu = static_cast<int>(universe.size());
  auto covers = [&](const std::string& setting, const PauliOperator& r) {
    for (int q = 1; q <= n; ++q) {
      const char c = pauli_letter(r, q);
      if (c != 'I' && c != setting[q - 1]) return false;
    }
    return true;
  };
  std::vector<std::uint64_t> masks;
  std::vector<std::string> names;
  for (const auto& s : candidates) {
    std::uint64_t m = 0;
    for (int i = 0; i < nu; ++i)
      if (covers(s, universe[i])) m |= 1ull << i;
    if (m == 0) continue;
    // Keep the lexicographically first setting per distinct coverage mask.
    bool dup = false;
    for (std::size_t j = 0; j < masks.size(); ++j)
      if (masks[j] == m) { dup = true; break; }
    if (!dup) {
      masks.push_back(m);
      names.push_back(s);
    }
  }

  std::vector<std::vector<int>> per_row(nu);
  for (std::size_t j = 0; j < masks.size(); ++j)
    for (int i = 0; i < nu; ++i)
      if (masks[j] >> i & 1) per_row[i].push_back(static_cast<int>(j));

  const std::uint64_t all = (nu == 64) ? ~0ull : (1ull << nu) - 1;
  std::vector<int> chosen, best;
  // Iterative deepening over the cover size keeps the result minimal and, with
  // lexicographic candidate order, deterministic.
  auto dfs = [&](auto&& self, std::uint64_t covered, std::size_t limit) -> bool {
    if (covered == all) {
      best = chosen;
      return true;
    }
    if (chosen.size() == limit) return false;
    int pick = -1;
    std::size_t fewest = SIZE_MAX;
    for (int i = 0; i < nu; ++i) {
      if (covered >> i & 1) continue;
      if (per_row[i].size() < fewest) {
        fewest = per_row[i].size();
        pick = i;
      }
    }
    if (pick < 0 || fewest == 0) return false;
    for (int j : per_row[pick]) {
      chosen.push_back(j);
      if (self(self, covered | masks[j], limit)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t limit = 1; limit <= masks.size(); ++limit) {
    chosen.clear();
    if (dfs(dfs, 0, limit)) break;
  }
  std::vector<std::string> out;
  for (int j : best) out.push_back(names[j]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace idcert
