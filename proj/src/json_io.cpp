#include "idcert/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace idcert {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

QuantumState state_from_json(const json& j) {
  if (!j.is_object()) throw InputError("state spec must be a JSON object");
  if (j.contains("name")) {
    if (!j.contains("n") || !j["n"].is_number_integer())
      throw InputError("named state spec needs an integer \"n\"");
    return make_named_state(j["name"].get<std::string>(), j["n"].get<int>());
  }
  if (j.contains("graph")) {
    const json& g = j["graph"];
    if (!g.is_array() || g.empty()) throw InputError("\"graph\" must be an adjacency matrix");
    int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (int r = 0; r < n; ++r) {
      if (!g[r].is_array() || static_cast<int>(g[r].size()) != n)
        throw InputError("adjacency matrix must be square");
      for (int c = 0; c < n; ++c) adj[r][c] = g[r][c].get<int>();
    }
    return make_graph_state(adj);
  }
  if (j.contains("amplitudes")) {
    const json& a = j["amplitudes"];
    if (!a.is_array() || a.empty()) throw InputError("\"amplitudes\" must be a nonempty array");
    Eigen::VectorXcd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_number()) {
        v[i] = Complex(a[i].get<double>(), 0);
      } else if (a[i].is_array() && a[i].size() == 2) {
        v[i] = Complex(a[i][0].get<double>(), a[i][1].get<double>());
      } else {
        throw InputError("amplitude entries must be numbers or [re, im] pairs");
      }
    }
    int n = 0;
    while ((std::size_t{1} << n) < a.size()) ++n;
    if ((std::size_t{1} << n) != a.size())
      throw InputError("amplitude count must be a power of two");
    return make_pure(n, std::move(v));
  }
  if (j.contains("basis")) {
    return make_basis(j["basis"].get<std::string>());
  }
  if (j.contains("bell_product")) {
    const json& b = j["bell_product"];
    int n = b.at("n").get<int>();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : b.at("pairs"))
      pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    return make_bell_product(n, pairs);
  }
  throw InputError(
      "state spec needs one of \"name\", \"graph\", \"amplitudes\", \"basis\", \"bell_product\"");
}

IdTable id_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
    throw InputError("ID file needs a \"rows\" array of Pauli strings");
  std::vector<PauliOperator> rows;
  for (const auto& r : j["rows"]) rows.push_back(parse_pauli(r.get<std::string>()));
  std::vector<int> lambdas;
  if (j.contains("lambdas")) {
    for (const auto& l : j["lambdas"]) {
      int v = l.get<int>();
      if (v != 1 && v != -1) throw InputError("lambdas must be +1 or -1");
      lambdas.push_back(v);
    }
  }
  return make_id(std::move(rows), std::move(lambdas));
}

json id_to_json(const IdTable& id) {
  json j;
  j["rows"] = json::array();
  j["lambdas"] = json::array();
  for (int i = 0; i < id.m(); ++i) {
    j["rows"].push_back(format_pauli(id.rows[i]));
    j["lambdas"].push_back(id.lambda(i));
  }
  return j;
}

std::vector<PauliOperator> generators_from_json(const json& j) {
  const json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else if (j.is_object() && j.contains("generators") && j["generators"].is_array()) {
    arr = &j["generators"];
  } else {
    throw InputError("group file needs a \"generators\" array of Pauli strings");
  }
  std::vector<PauliOperator> out;
  for (const auto& s : *arr) out.push_back(parse_pauli(s.get<std::string>()));
  if (out.empty()) throw InputError("group file lists no generators");
  return out;
}

ExperimentDataset dataset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n"))
    throw InputError("dataset needs an integer \"n\"");
  ExperimentDataset ds;
  ds.n_qubits = j["n"].get<int>();
  if (j.contains("provenance")) ds.provenance = j["provenance"].get<std::string>();
  if (j.contains("reported_alpha_sigma"))
    ds.reported_alpha_sigma = j["reported_alpha_sigma"].get<double>();
  if (j.contains("records")) {
    for (const auto& r : j["records"]) {
      CountsRecord rec;
      rec.setting = r.at("setting").get<std::string>();
      for (const auto& [outcome, c] : r.at("counts").items())
        rec.counts[outcome] = c.get<long long>();
      if (r.contains("seconds")) rec.acquisition_seconds = r["seconds"].get<double>();
      ds.records.push_back(std::move(rec));
    }
  }
  if (j.contains("exact")) {
    for (const auto& e : j["exact"]) {
      Measured m;
      m.value = e.at("value").get<double>();
      m.sigma = e.contains("sigma") ? e["sigma"].get<double>() : 0.0;
      ds.exact.emplace_back(e.at("observable").get<std::string>(), m);
    }
  }
  return normalize_dataset(std::move(ds));
}

json dataset_to_json(const ExperimentDataset& ds) {
  json j;
  j["n"] = ds.n_qubits;
  if (!ds.provenance.empty()) j["provenance"] = ds.provenance;
  if (ds.reported_alpha_sigma) j["reported_alpha_sigma"] = *ds.reported_alpha_sigma;
  if (!ds.records.empty()) {
    j["records"] = json::array();
    for (const auto& rec : ds.records) {
      json r;
      r["setting"] = rec.setting;
      r["counts"] = json::object();
      for (const auto& [outcome, c] : rec.counts) r["counts"][outcome] = c;
      if (rec.acquisition_seconds) r["seconds"] = *rec.acquisition_seconds;
      j["records"].push_back(std::move(r));
    }
  }
  if (!ds.exact.empty()) {
    j["exact"] = json::array();
    for (const auto& [obs, m] : ds.exact)
      j["exact"].push_back({{"observable", obs}, {"value", m.value}, {"sigma", m.sigma}});
  }
  return j;
}

ExperimentDataset dataset_from_csv(std::istream& in) {
  ExperimentDataset ds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string setting, outcome, count_str;
    if (!std::getline(ls, setting, ',') || !std::getline(ls, outcome, ',') ||
        !std::getline(ls, count_str))
      throw InputError("CSV line " + std::to_string(lineno) +
                       ": expected setting,outcome,count");
    auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    };
    trim(setting);
    trim(outcome);
    trim(count_str);
    if (lineno == 1 && setting == "setting") continue;  // header
    long long count = 0;
    try {
      count = std::stoll(count_str);
    } catch (const std::exception&) {
      throw InputError("CSV line " + std::to_string(lineno) + ": bad count \"" + count_str + "\"");
    }
    if (ds.n_qubits == 0) ds.n_qubits = static_cast<int>(setting.size());
    CountsRecord rec;
    rec.setting = setting;
    rec.counts[outcome] = count;
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw InputError("CSV contains no data rows");
  return normalize_dataset(std::move(ds));  // merges the per-line records
}

std::string dataset_to_csv(const ExperimentDataset& ds) {
  std::ostringstream os;
  os << "setting,outcome,count\n";
  for (const auto& rec : ds.records)
    for (const auto& [outcome, c] : rec.counts)
      os << rec.setting << ',' << outcome << ',' << c << '\n';
  return os.str();
}

std::vector<StateClass> catalog_from_json(const json& j) {
  const json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else if (j.is_object() && j.contains("classes")) {
    arr = &j["classes"];
  } else {
    throw InputError("catalog file needs a \"classes\" array");
  }
  std::vector<StateClass> out;
  for (const auto& e : *arr) {
    StateClass c;
    c.label = e.at("label").get<std::string>();
    c.seed = state_from_json(e.at("state"));
    out.push_back(std::move(c));
  }
  if (out.empty()) throw InputError("catalog lists no classes");
  return out;
}

json gamma_results_to_json(const std::vector<GammaEstimate>& rows, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["classes"] = json::array();
  for (const auto& r : rows) {
    json e;
    e["label"] = r.class_label;
    e["gamma"] = r.value;
    e["n_starts"] = r.n_starts;
    e["n_converged"] = r.n_converged;
    e["best_parameters"] = r.best_parameters;
    j["classes"].push_back(std::move(e));
  }
  return j;
}

json report_to_json(const CertReport& r) {
  json j;
  j["state"] = r.state_name;
  j["id"] = id_to_json(r.id);
  j["id"]["whole"] = r.cls.whole;
  j["id"]["negative"] = r.cls.sign < 0;
  j["id"]["entangled"] = r.cls.entangled;
  j["id"]["critical"] = r.cls.critical;
  j["id"]["r"] = r.cls.r;
  j["alpha"] = {{"qm", r.alpha_qm},
                {"lhvt", r.alpha_lhvt},
                {"exp", r.alpha_exp},
                {"sigma", r.alpha_sigma},
                {"sigma_source", r.sigma_source},
                {"violation_sigmas", r.violation_sigmas}};
  auto fid = [](const FidelityBound& f) {
    return json{{"method", f.method},
                {"value", f.value},
                {"clamped", f.clamped},
                {"sigma", f.sigma},
                {"subspace_only", f.subspace_only}};
  };
  j["fidelity"] = json::object();
  j["fidelity"]["id"] = fid(r.f_id);
  if (r.f_gosg) j["fidelity"]["gosg"] = fid(*r.f_gosg);
  if (r.f_sg) j["fidelity"]["sg"] = fid(*r.f_sg);
  if (r.f_qst) j["fidelity"]["qst"] = fid(*r.f_qst);
  if (r.tomo_min_eigenvalue) j["fidelity"]["qst"]["min_eigenvalue"] = *r.tomo_min_eigenvalue;
  j["witnesses"] = json::array();
  for (const auto& w : r.witnesses)
    j["witnesses"].push_back({{"class", w.class_label},
                              {"gamma", w.gamma},
                              {"source", w.source},
                              {"value", w.value},
                              {"sigma", w.sigma}});
  if (r.tolerance)
    j["noise_tolerance"] = {{"m", r.tolerance->m},
                            {"gamma", r.tolerance->gamma},
                            {"r", r.tolerance->r},
                            {"p_max", r.tolerance->p_max}};
  j["min_settings"] = r.settings_plan;
  j["rows"] = json::array();
  for (std::size_t i = 0; i < r.row_values.size(); ++i)
    j["rows"].push_back({{"observable", format_pauli(r.id.rows[static_cast<int>(i)])},
                         {"lambda", r.id.lambda(static_cast<int>(i))},
                         {"value", r.row_values[i].value},
                         {"sigma", r.row_values[i].sigma}});
  return j;
}

std::string report_plot_csv(const CertReport& r) {
  std::ostringstream os;
  os << "kind,label,value,sigma\n";
  for (std::size_t i = 0; i < r.row_values.size(); ++i) {
    int idx = static_cast<int>(i);
    os << "expectation," << (r.id.lambda(idx) > 0 ? "" : "-")
       << format_pauli(r.id.rows[idx]) << ','
       << r.id.lambda(idx) * r.row_values[i].value << ',' << r.row_values[i].sigma << '\n';
  }
  auto frow = [&os](const FidelityBound& f) {
    os << "fidelity," << f.method << ',' << f.value << ',' << f.sigma << '\n';
  };
  frow(r.f_id);
  if (r.f_gosg) frow(*r.f_gosg);
  if (r.f_sg) frow(*r.f_sg);
  if (r.f_qst) frow(*r.f_qst);
  return os.str();
}

}  // namespace idcert
