// Experiment pipeline: counts datasets, expectations with Poisson MC errors,
// settings plans, synthetic experiments, tomography, certification reports.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idcert/certification.hpp"
#include "idcert/gamma.hpp"

namespace idcert {

// One local measurement basis per qubit, e.g. "ZZXY".
struct MeasurementSetting {
  std::string bases;
};

// Raw coincidence counts for one setting. Outcome keys are N-bit strings;
// bit q is 0 for the +1 eigenstate of the setting's basis on qubit q.
struct CountsRecord {
  std::string setting;
  std::map<std::string, long long> counts;
  std::optional<double> acquisition_seconds;

  long long total() const;
};

// Either raw counts or (ingest mode for published tables) exact expectation
// values of structural Pauli strings with their quoted sigmas.
struct ExperimentDataset {
  int n_qubits = 0;
  std::vector<CountsRecord> records;
  std::vector<std::pair<std::string, Measured>> exact;  // observable -> value
  std::optional<double> reported_alpha_sigma;  // publisher's aggregate Bell-parameter sigma
  std::string provenance;

  bool exact_mode() const { return !exact.empty(); }
};

// Validates invariants and merges duplicate settings by summing counts.
ExperimentDataset normalize_dataset(ExperimentDataset ds);

// Count-weighted estimate across every compatible record (or an exact-table
// lookup), times the observable's sign. sigma: quoted sigma in exact mode,
// else Poisson MC. Throws CoverageError naming the setting pattern needed.
Measured expectation_from_counts(const ExperimentDataset& ds, const PauliOperator& obs,
                                 int mc_cycles = 100, std::uint64_t mc_seed = 2026);

// Point estimate only (no sigma); used inside MC cycles.
double expectation_point(const ExperimentDataset& ds, const PauliOperator& obs);

// Standard deviation of the functional across cycles, each count resampled
// Poisson(original). cycles=1 degenerates to 0 (flagged). Deterministic per
// seed regardless of thread count.
double poisson_mc(const ExperimentDataset& ds,
                  const std::function<double(const ExperimentDataset&)>& functional,
                  int cycles, std::uint64_t rng_seed, bool* degenerate = nullptr,
                  bool parallel = true);

// Acquisition plan: the exact minimal setting cover of the rows.
std::vector<MeasurementSetting> plan_settings(const std::vector<PauliOperator>& rows);

// Born-rule sampling of state (depolarized by p) in each setting; per-setting
// totals are Poisson(shots), split multinomially. Deterministic per seed.
ExperimentDataset simulate_experiment(const QuantumState& state, double p_depolarizing,
                                      const std::vector<MeasurementSetting>& settings,
                                      long long shots_per_setting, std::uint64_t rng_seed);

// All 3^n basis strings.
std::vector<MeasurementSetting> full_tomography_settings(int n);

struct TomographyResult {
  QuantumState rho;          // linear inversion; Hermitian, trace 1, maybe non-positive
  double min_eigenvalue = 0;
};

// rho = 2^-n sum_P <P> P over all Pauli strings; requires all 3^n settings.
TomographyResult linear_inversion_tomography(const ExperimentDataset& ds);

// What certification_report certifies against.
struct TargetSpec {
  std::string name;  // display label
  QuantumState state;
  std::optional<std::vector<PauliOperator>> generators;  // for the GoSG bound
};

struct ReportOptions {
  int mc_cycles = 100;
  std::uint64_t rng_seed = 0;
  // Cached numeric class bounds to include as witness rows: (class label, gamma).
  std::vector<std::pair<std::string, double>> numeric_gammas;
};

struct WitnessReportEntry {
  std::string class_label;
  double gamma = 0;
  std::string source;
  double value = 0;  // gamma - alpha_exp
  double sigma = 0;
};

struct CertReport {
  std::string state_name;
  IdTable id;
  IdClassification cls;
  std::vector<Measured> row_values;
  double alpha_exp = 0;
  double alpha_sigma = 0;
  std::string sigma_source;  // "quadrature" | "poisson_mc" | "reported"
  double alpha_qm = 0;
  double alpha_lhvt = 0;
  bool lhvt_is_theorem = false;  // true: whole-negative bound M-2; false: brute force
  double violation_sigmas = 0;
  FidelityBound f_id;
  std::optional<FidelityBound> f_gosg;
  std::optional<FidelityBound> f_sg;
  std::optional<FidelityBound> f_qst;
  std::optional<double> tomo_min_eigenvalue;
  std::vector<WitnessReportEntry> witnesses;
  std::optional<NoiseTolerance> tolerance;
  std::vector<std::string> settings_plan;
};

CertReport certification_report(const ExperimentDataset& ds, const TargetSpec& target,
                                const IdTable& id, const ReportOptions& opts = {});

// Human-readable summary (Bell verdict, fidelity bounds, witness verdicts).
std::string report_summary(const CertReport& report);

}  // namespace idcert
