// idcert: certify stabilizer states from a linear number of Pauli measurements.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "idcert/json_io.hpp"

using namespace idcert;
using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// A file for find-ids either specifies a state or lists group generators.
StabilizerGroup group_from_file(const std::string& path) {
  json j = load_json_file(path);
  if (j.is_array() || (j.is_object() && j.contains("generators")))
    return group_from_generators(generators_from_json(j));
  return state_stabilizer(state_from_json(j));
}

std::string state_display_name(const json& spec, const std::string& path) {
  if (spec.is_object() && spec.contains("name")) {
    std::string name = spec["name"].get<std::string>();
    if (spec.contains("n")) name += "(" + std::to_string(spec["n"].get<int>()) + ")";
    return name;
  }
  auto slash = path.find_last_of('/');
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = stem.find_last_of('.');
  return dot == std::string::npos ? stem : stem.substr(0, dot);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_text_file(out_path, content);
  }
}

std::string id_label(const IdClassification& c) {
  return "ID" + std::to_string(c.m) + "^" + std::to_string(c.n) + (c.whole ? "_w" : "_p");
}

std::string format_id_row(const IdTable& id) {
  std::string s;
  for (int i = 0; i < id.m(); ++i) {
    if (i) s += ' ';
    s += (id.lambda(i) > 0 ? '+' : '-');
    s += format_pauli(id.rows[i]);
  }
  return s;
}

int cmd_find_ids(const std::string& input, int max_m, const IdFilters& filters,
                 const std::string& out_path) {
  StabilizerGroup group = group_from_file(input);
  int cap = max_m > 0 ? max_m : group.n + 1;
  std::vector<IdTable> ids = find_ids_in_group(group, cap, filters);
  std::ostringstream table;
  json jout = json::array();
  for (const auto& id : ids) {
    IdClassification c = check_id(id);
    table << id_label(c) << (c.sign < 0 ? " negative" : " positive") << "  "
          << format_id_row(id) << "  [" << (c.entangled ? "entangled" : "separable")
          << (c.critical ? ", critical" : "") << "]  k=" << c.k << " r=" << c.r
          << " settings=" << c.min_settings << "\n";
    json je = id_to_json(id);
    je["whole"] = c.whole;
    je["negative"] = c.sign < 0;
    je["entangled"] = c.entangled;
    je["critical"] = c.critical;
    je["r"] = c.r;
    je["min_settings"] = c.min_settings;
    jout.push_back(std::move(je));
  }
  table << "found " << ids.size() << " IDs (M <= " << cap << ") in a group with "
        << group.elements.size() << " elements\n";
  std::cout << table.str();
  if (!out_path.empty()) write_text_file(out_path, jout.dump(2) + "\n");
  return ids.empty() ? 3 : 0;
}

IdTable auto_select_id(const StabilizerGroup& group) {
  IdFilters want;
  want.whole = true;
  want.negative = true;
  want.entangled = true;
  std::vector<IdTable> ids = find_ids_in_group(group, group.n + 1, want);
  if (ids.empty()) {
    IdFilters any;
    any.entangled = true;
    ids = find_ids_in_group(group, group.n + 1, any);
  }
  if (ids.empty()) throw InputError("no entangled ID found in the state's stabilizer group");
  // Prefer the largest M; ties broken by the deterministic search order.
  std::size_t best = 0;
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (ids[i].m() > ids[best].m()) best = i;
  return ids[best];
}

int cmd_certify(const std::string& data_path, const std::string& state_path,
                const std::string& id_arg, int cycles, std::uint64_t seed,
                const std::string& numeric_gamma_path, const std::string& out_path,
                const std::string& plot_csv_path) {
  ExperimentDataset ds = dataset_from_json(load_json_file(data_path));
  json state_spec = load_json_file(state_path);
  TargetSpec target;
  target.state = state_from_json(state_spec);
  target.name = state_display_name(state_spec, state_path);
  if (state_spec.is_object() && state_spec.contains("name")) {
    auto gens = canonical_generators(state_spec["name"].get<std::string>(), target.state.n);
    if (gens) target.generators = *gens;
  }
  if (!target.generators && target.state.pure && target.state.n <= 6) {
    try {
      target.generators = state_stabilizer(target.state).generators;
    } catch (const std::exception&) {
    }
  }
  IdTable id = (id_arg == "auto") ? auto_select_id(state_stabilizer(target.state))
                                  : id_from_json(load_json_file(id_arg));
  ReportOptions opts;
  opts.mc_cycles = cycles;
  opts.rng_seed = seed;
  if (!numeric_gamma_path.empty()) {
    json jg = load_json_file(numeric_gamma_path);
    for (const auto& e : jg.at("classes"))
      opts.numeric_gammas.emplace_back(e.at("label").get<std::string>(),
                                       e.at("gamma").get<double>());
  }
  CertReport rep = certification_report(ds, target, id, opts);
  std::cout << report_summary(rep);
  if (!out_path.empty()) write_text_file(out_path, report_to_json(rep).dump(2) + "\n");
  if (!plot_csv_path.empty()) write_text_file(plot_csv_path, report_plot_csv(rep));
  return 0;
}

int cmd_gamma(const std::string& id_path, const std::string& classes_path, int starts,
              std::uint64_t seed, const std::string& out_path) {
  IdTable id = id_from_json(load_json_file(id_path));
  std::vector<StateClass> catalog;
  if (!classes_path.empty()) {
    catalog = catalog_from_json(load_json_file(classes_path));
  } else if (id.n() == 4) {
    catalog = default_catalog_n4();
  } else {
    throw InputError("no built-in class catalog for " + std::to_string(id.n()) +
                     " qubits; pass --classes");
  }
  if (starts < 1) throw InputError("--starts must be >= 1");
  if (starts < 50)
    std::cout << "warning: " << starts
              << " start(s) per class; the returned upper bound may be loose\n";
  std::vector<GammaEstimate> rows = gamma_table(id, catalog, starts, seed);
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.class_label.size());
  std::ostringstream os;
  os << "class";
  os << std::string(w - 5, ' ') << "  gamma   converged\n";
  for (const auto& r : rows) {
    os << r.class_label << std::string(w - r.class_label.size(), ' ') << "  "
       << fmt("%.4f", r.value) << "  " << r.n_converged << "/" << r.n_starts << "\n";
  }
  std::cout << os.str();
  if (!out_path.empty())
    write_text_file(out_path, gamma_results_to_json(rows, seed).dump(2) + "\n");
  return 0;
}

int cmd_simulate(const std::string& state_path, double p, long long shots,
                 const std::string& settings_arg, const std::string& id_path,
                 bool full_tomo, std::uint64_t seed, const std::string& out_path) {
  QuantumState state = state_from_json(load_json_file(state_path));
  std::vector<MeasurementSetting> settings;
  if (settings_arg == "auto") {
    if (full_tomo) {
      settings = full_tomography_settings(state.n);
    } else if (!id_path.empty()) {
      IdTable id = id_from_json(load_json_file(id_path));
      settings = plan_settings(id.rows);
    } else {
      throw InputError("--settings auto needs --id (plan for an ID) or --full-tomo");
    }
  } else {
    json js = load_json_file(settings_arg);
    const json& arr = js.is_array() ? js : js.at("settings");
    for (const auto& s : arr) settings.push_back({s.get<std::string>()});
    if (full_tomo)
      for (const auto& s : full_tomography_settings(state.n)) settings.push_back(s);
  }
  ExperimentDataset ds = simulate_experiment(state, p, settings, shots, seed);
  emit(out_path, dataset_to_json(ds).dump(2) + "\n");
  return 0;
}

int cmd_tomo(const std::string& data_path, const std::string& state_path,
             const std::string& out_path) {
  ExperimentDataset ds = dataset_from_json(load_json_file(data_path));
  TomographyResult tr = linear_inversion_tomography(ds);
  double f = -1;
  if (!state_path.empty()) {
    QuantumState target = state_from_json(load_json_file(state_path));
    f = fidelity(target, tr.rho);
    std::cout << "F_QST = " << fmt("%.6f", f) << "\n";
  }
  std::cout << "lowest eigenvalue of the linear-inversion rho: "
            << fmt("%.6f", tr.min_eigenvalue) << "\n";
  if (!out_path.empty()) {
    json j;
    j["n"] = tr.rho.n;
    if (f >= -0.5) j["fidelity"] = f;
    j["min_eigenvalue"] = tr.min_eigenvalue;
    j["rho_re"] = json::array();
    j["rho_im"] = json::array();
    for (Eigen::Index r = 0; r < tr.rho.rho.rows(); ++r) {
      json re = json::array(), im = json::array();
      for (Eigen::Index c = 0; c < tr.rho.rho.cols(); ++c) {
        re.push_back(tr.rho.rho(r, c).real());
        im.push_back(tr.rho.rho(r, c).imag());
      }
      j["rho_re"].push_back(std::move(re));
      j["rho_im"].push_back(std::move(im));
    }
    write_text_file(out_path, j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idcert: multiqubit stabilizer-state certification from identity products"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_path;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (stochastic subcommands require it)");
  app.add_option("--threads", threads, "worker threads (0 = library default)");
  app.add_option("--out", out_path, "write machine-readable output to this file");

  auto* find = app.add_subcommand("find-ids", "enumerate IDs in a stabilizer group");
  std::string find_input;
  int max_m = 0;
  bool f_whole = false, f_negative = false, f_entangled = false, f_critical = false,
       f_full_width = false;
  find->add_option("input", find_input, "state spec or group JSON file")->required();
  find->add_option("--max-m", max_m, "largest ID size to search (default N+1)");
  find->add_flag("--whole", f_whole, "keep only whole IDs");
  find->add_flag("--negative", f_negative, "keep only negative IDs");
  find->add_flag("--entangled", f_entangled, "keep only entangled IDs");
  find->add_flag("--critical", f_critical, "keep only critical IDs");
  find->add_flag("--full-width", f_full_width, "keep only IDs with no identity column");

  auto* certify = app.add_subcommand("certify", "certification report from a dataset");
  std::string cert_data, cert_state, cert_id = "auto", cert_gammas, cert_plot;
  int cert_cycles = 100;
  certify->add_option("dataset", cert_data, "dataset JSON file")->required();
  certify->add_option("--state", cert_state, "target state spec JSON file")->required();
  certify->add_option("--id", cert_id, "ID JSON file, or \"auto\" to search the target's group");
  certify->add_option("--cycles", cert_cycles, "Monte Carlo cycles for count datasets");
  certify->add_option("--numeric-gammas", cert_gammas,
                      "attach numeric class bounds from a gamma JSON file");
  certify->add_option("--plot-csv", cert_plot, "write plot-data CSV here");

  auto* gamma = app.add_subcommand("gamma", "numeric entanglement-class bounds");
  std::string gamma_id, gamma_classes;
  int gamma_starts = 400;
  gamma->add_option("--id", gamma_id, "ID JSON file")->required();
  gamma->add_option("--classes", gamma_classes, "class catalog JSON (default: built-in 4-qubit catalog)");
  gamma->add_option("--starts", gamma_starts, "Nelder-Mead starts per class");

  auto* simulate = app.add_subcommand("simulate", "synthesize a noisy counts dataset");
  std::string sim_state, sim_settings = "auto", sim_id;
  double sim_p = 0;
  long long sim_shots = 10000;
  bool sim_full_tomo = false;
  simulate->add_option("state", sim_state, "state spec JSON file")->required();
  simulate->add_option("--p", sim_p, "depolarizing noise strength in [0,1]");
  simulate->add_option("--shots", sim_shots, "mean shots per setting");
  simulate->add_option("--settings", sim_settings, "\"auto\" or a JSON file of setting strings");
  simulate->add_option("--id", sim_id, "ID JSON file for the auto settings plan");
  simulate->add_flag("--full-tomo", sim_full_tomo, "include all 3^N tomography settings");

  auto* tomo = app.add_subcommand("tomo", "linear-inversion tomography");
  std::string tomo_data, tomo_state;
  tomo->add_option("dataset", tomo_data, "dataset JSON file")->required();
  tomo->add_option("--state", tomo_state, "target state spec for the fidelity readout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (find->parsed()) {
      IdFilters filters;
      if (f_whole) filters.whole = true;
      if (f_negative) filters.negative = true;
      if (f_entangled) filters.entangled = true;
      if (f_critical) filters.critical = true;
      filters.full_width = f_full_width;
      return cmd_find_ids(find_input, max_m, filters, out_path);
    }
    if (certify->parsed())
      return cmd_certify(cert_data, cert_state, cert_id, cert_cycles, seed, cert_gammas,
                         out_path, cert_plot);
    if (gamma->parsed()) {
      if (seed_opt->count() == 0) throw InputError("gamma needs --seed");
      return cmd_gamma(gamma_id, gamma_classes, gamma_starts, seed, out_path);
    }
    if (simulate->parsed()) {
      if (seed_opt->count() == 0) throw InputError("simulate needs --seed");
      return cmd_simulate(sim_state, sim_p, sim_shots, sim_settings, sim_id, sim_full_tomo,
                          seed, out_path);
    }
    if (tomo->parsed()) return cmd_tomo(tomo_data, tomo_state, out_path);
  } catch (const CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return 4;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
