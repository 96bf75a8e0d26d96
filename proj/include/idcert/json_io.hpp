// JSON/CSV serialization for states, IDs, groups, datasets, and reports.
#pragma once

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "idcert/gamma.hpp"
#include "idcert/measurement.hpp"

namespace idcert {

// Reads and parses a JSON file; throws InputError on I/O or syntax problems.
nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// State spec: {"name": "...", "n": N} | {"graph": [[...], ...]} |
// {"amplitudes": [[re, im], ...]} | {"basis": "0101"} |
// {"bell_product": {"n": N, "pairs": [[a, b], ...]}}
QuantumState state_from_json(const nlohmann::json& j);

// {"rows": ["XXX", "XYY", ...], "lambdas": [1, -1, ...]} (lambdas optional)
IdTable id_from_json(const nlohmann::json& j);
nlohmann::json id_to_json(const IdTable& id);

// Group file: ["ZZII", "-IZYY", ...] or {"generators": [...]}
std::vector<PauliOperator> generators_from_json(const nlohmann::json& j);

// {"n": N, "records": [{"setting": "ZZXY", "counts": {"0010": 17}, "seconds": 4800}],
//  "exact": [{"observable": "ZZII", "value": 0.93, "sigma": 0.01}],
//  "reported_alpha_sigma": 0.05, "provenance": "..."}      (records XOR exact)
ExperimentDataset dataset_from_json(const nlohmann::json& j);
nlohmann::json dataset_to_json(const ExperimentDataset& ds);

// CSV rows "setting,outcome,count" (optional header line).
ExperimentDataset dataset_from_csv(std::istream& in);
std::string dataset_to_csv(const ExperimentDataset& ds);

// Gamma catalog: {"classes": [{"label": "...", "state": <state spec>}, ...]}
// or a bare array of such entries.
std::vector<StateClass> catalog_from_json(const nlohmann::json& j);
nlohmann::json gamma_results_to_json(const std::vector<GammaEstimate>& rows,
                                     std::uint64_t seed);

nlohmann::json report_to_json(const CertReport& r);

// Plot-data CSV: per-row expectations then fidelity methods.
std::string report_plot_csv(const CertReport& r);

}  // namespace idcert
