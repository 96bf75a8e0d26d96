// Identity products (IDs): validation, classification, search, settings planning.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idcert/stabilizer.hpp"

namespace idcert {

// M mutually commuting observables whose product is +/-I, with an eigenvalue
// assignment. Rows found in stabilizer groups are stored structurally
// (positive) and carry the group signs in lambdas.
struct IdTable {
  std::vector<PauliOperator> rows;
  std::vector<int> lambdas;  // +/-1 per row; empty means all +1

  int m() const { return static_cast<int>(rows.size()); }
  int n() const { return rows.empty() ? 0 : rows[0].n; }
  int lambda(int i) const { return lambdas.empty() ? 1 : lambdas[i]; }
};

struct IdClassification {
  int sign = 1;      // structural product sign: -1 = negative ID
  bool whole = false;
  bool entangled = false;
  bool critical = false;
  int k = 0;         // GF(2) rank of the rows
  int r = 1;         // joint eigenspace rank 2^{n-k}
  int min_settings = 0;
  int m = 0;
  int n = 0;
};

struct IdFilters {
  std::optional<bool> whole;
  std::optional<bool> negative;
  std::optional<bool> entangled;
  std::optional<bool> critical;
  bool full_width = false;  // no all-identity column
};

IdTable make_id(std::vector<PauliOperator> rows, std::vector<int> lambdas = {});

// Validates (widths, Hermiticity, commutation, product = +/-I) and classifies.
IdClassification check_id(const IdTable& id);

// Structural-row predicates (signs and lambdas are irrelevant to these).
bool is_whole(const std::vector<PauliOperator>& rows);
bool is_entangled(const std::vector<PauliOperator>& rows);
bool is_critical(const std::vector<PauliOperator>& rows);

// Does the eigenvalue assignment satisfy prod lambda == structural sign?
bool assignment_consistent(const IdTable& id);

// All IDs of size 3..m_max among the group's nonidentity elements, emitted in
// deterministic order (rows canonically sorted; tables sorted lexicographically
// by row text). Subset enumeration is OpenMP-parallel when parallel is true;
// the serial path is the reference and both produce identical output.
std::vector<IdTable> find_ids_in_group(const StabilizerGroup& group, int m_max,
                                       const IdFilters& filters = {},
                                       bool parallel = true);

// Exact minimum set of measurement settings (basis letters per qubit) that
// covers every non-identity row; a row is covered when the setting matches its
// letter on every non-identity position.
std::vector<std::string> min_settings(const std::vector<PauliOperator>& rows);

}  // namespace idcert
