#include "idcert/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Dense>

#include "idcert/id_analysis.hpp"
#include "idcert/stabilizer.hpp"

namespace idcert {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void check_setting_string(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n)
    throw InputError("setting \"" + s + "\" has length " + std::to_string(s.size()) +
                     ", expected " + std::to_string(n));
  for (char c : s)
    if (c != 'X' && c != 'Y' && c != 'Z')
      throw InputError("setting \"" + s + "\" contains a letter other than X, Y, Z");
}

void check_outcome_string(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n)
    throw InputError("outcome \"" + s + "\" has length " + std::to_string(s.size()) +
                     ", expected " + std::to_string(n));
  for (char c : s)
    if (c != '0' && c != '1')
      throw InputError("outcome \"" + s + "\" is not a bitstring");
}

// Does this setting measure obs (setting letter equals obs letter on every
// non-identity position)?
bool setting_matches(const std::string& setting, const PauliOperator& obs) {
  for (int q = 1; q <= obs.n; ++q) {
    char l = pauli_letter(obs, q);
    if (l == 'I') continue;
    if (setting[q - 1] != l) return false;
  }
  return true;
}

// Pattern a hypothetical compatible setting must match: obs letters with '*'
// on identity positions.
std::string needed_pattern(const PauliOperator& obs) {
  std::string s;
  for (int q = 1; q <= obs.n; ++q) {
    char l = pauli_letter(obs, q);
    s.push_back(l == 'I' ? '*' : l);
  }
  return s;
}

// Parity of outcome bits on obs's support; outcome index 0 = qubit 1.
int outcome_parity(const std::string& outcome, const PauliOperator& obs) {
  int ones = 0;
  for (int q = 1; q <= obs.n; ++q) {
    if (pauli_letter(obs, q) == 'I') continue;
    if (outcome[q - 1] == '1') ++ones;
  }
  return (ones % 2 == 0) ? 1 : -1;
}

}  // namespace

long long CountsRecord::total() const {
  long long t = 0;
  for (const auto& [k, v] : counts) t += v;
  return t;
}

ExperimentDataset normalize_dataset(ExperimentDataset ds) {
  if (ds.n_qubits < 1) throw InputError("dataset has no qubits");
  if (!ds.exact.empty() && !ds.records.empty())
    throw InputError("dataset mixes raw counts records with exact expectation values");
  std::set<std::string> seen_obs;
  for (auto& [obs_str, m] : ds.exact) {
    PauliOperator op = parse_pauli(obs_str);
    if (op.n != ds.n_qubits)
      throw InputError("exact-value observable " + obs_str + " has wrong width");
    std::string canon = format_pauli(structural(op));
    if (!seen_obs.insert(canon).second)
      throw InputError("duplicate exact-value observable " + canon);
    obs_str = canon;
    if (std::abs(m.value) > 1 + kTolInput)
      throw InputError("exact expectation value for " + canon + " lies outside [-1, 1]");
    if (m.sigma < 0) throw InputError("negative sigma for " + canon);
  }
  std::map<std::string, std::size_t> where;
  std::vector<CountsRecord> merged;
  for (auto& rec : ds.records) {
    check_setting_string(rec.setting, ds.n_qubits);
    long long nonzero = 0;
    for (const auto& [outcome, c] : rec.counts) {
      check_outcome_string(outcome, ds.n_qubits);
      if (c < 0) throw InputError("negative count for outcome " + outcome);
      nonzero += c;
    }
    if (nonzero == 0)
      throw InputError("record for setting " + rec.setting + " has no nonzero counts");
    auto it = where.find(rec.setting);
    if (it == where.end()) {
      where[rec.setting] = merged.size();
      merged.push_back(std::move(rec));
    } else {
      CountsRecord& dst = merged[it->second];
      for (const auto& [outcome, c] : rec.counts) dst.counts[outcome] += c;
      if (rec.acquisition_seconds) {
        dst.acquisition_seconds =
            dst.acquisition_seconds.value_or(0.0) + *rec.acquisition_seconds;
      }
    }
  }
  ds.records = std::move(merged);
  return ds;
}

double expectation_point(const ExperimentDataset& ds, const PauliOperator& obs) {
  if (obs.n != ds.n_qubits)
    throw InputError("observable width does not match dataset");
  int sign = hermitian_sign(obs);
  if (is_identity_letters(obs)) return static_cast<double>(sign);
  if (ds.exact_mode()) {
    std::string key = format_pauli(structural(obs));
    for (const auto& [k, m] : ds.exact)
      if (k == key) return sign * m.value;
    throw CoverageError("observable " + key +
                        " is unmeasurable with dataset: no exact value recorded");
  }
  double weighted = 0;
  long long total = 0;
  for (const auto& rec : ds.records) {
    if (!setting_matches(rec.setting, obs)) continue;
    long long t = rec.total();
    double acc = 0;
    for (const auto& [outcome, c] : rec.counts)
      acc += outcome_parity(outcome, obs) * static_cast<double>(c);
    weighted += acc;  // count-weighted: sum of parities, normalized once at the end
    total += t;
  }
  if (total == 0)
    throw CoverageError("observable " + format_pauli(structural(obs)) +
                        " is unmeasurable with dataset: needs a setting matching " +
                        needed_pattern(obs) + " (any basis at *)");
  return sign * weighted / static_cast<double>(total);
}

double poisson_mc(const ExperimentDataset& ds,
                  const std::function<double(const ExperimentDataset&)>& functional,
                  int cycles, std::uint64_t rng_seed, bool* degenerate, bool parallel) {
  if (cycles < 1) throw InputError("poisson_mc needs at least one cycle");
  if (degenerate) *degenerate = (cycles == 1);
  if (cycles == 1) return 0.0;
  std::vector<double> vals(cycles);
  auto run_cycle = [&](int c) {
    std::mt19937_64 rng(mix_seed(rng_seed, static_cast<std::uint64_t>(c)));
    ExperimentDataset re = ds;
    for (auto& rec : re.records)
      for (auto& [outcome, count] : rec.counts) {
        if (count <= 0) continue;  // Poisson(0) stays 0
        std::poisson_distribution<long long> poi(static_cast<double>(count));
        count = poi(rng);
      }
    vals[c] = functional(re);
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cycles; ++c) run_cycle(c);
  } else {
    for (int c = 0; c < cycles; ++c) run_cycle(c);
  }
#else
  (void)parallel;
  for (int c = 0; c < cycles; ++c) run_cycle(c);
#endif
  double mean = 0;
  for (double v : vals) mean += v;
  mean /= cycles;
  double ss = 0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (cycles - 1));
}

Measured expectation_from_counts(const ExperimentDataset& ds, const PauliOperator& obs,
                                 int mc_cycles, std::uint64_t mc_seed) {
  double value = expectation_point(ds, obs);
  if (is_identity_letters(obs)) return {value, 0.0};
  if (ds.exact_mode()) {
    std::string key = format_pauli(structural(obs));
    for (const auto& [k, m] : ds.exact)
      if (k == key) return {value, m.sigma};
    return {value, 0.0};  // unreachable: expectation_point already threw
  }
  double sigma = poisson_mc(
      ds, [&obs](const ExperimentDataset& d) { return expectation_point(d, obs); },
      mc_cycles, mc_seed);
  return {value, sigma};
}

std::vector<MeasurementSetting> plan_settings(const std::vector<PauliOperator>& rows) {
  std::vector<MeasurementSetting> out;
  for (const auto& s : min_settings(rows)) out.push_back({s});
  return out;
}

std::vector<MeasurementSetting> full_tomography_settings(int n) {
  if (n < 1 || n > 10) throw InputError("tomography settings need 1..10 qubits");
  std::vector<MeasurementSetting> out;
  std::string cur(n, 'X');
  const char letters[3] = {'X', 'Y', 'Z'};
  std::vector<int> idx(n, 0);
  for (;;) {
    for (int q = 0; q < n; ++q) cur[q] = letters[idx[q]];
    out.push_back({cur});
    int q = n - 1;
    while (q >= 0 && idx[q] == 2) idx[q--] = 0;
    if (q < 0) break;
    ++idx[q];
  }
  return out;
}

ExperimentDataset simulate_experiment(const QuantumState& state, double p_depolarizing,
                                      const std::vector<MeasurementSetting>& settings,
                                      long long shots_per_setting, std::uint64_t rng_seed) {
  if (shots_per_setting < 1) throw InputError("shots_per_setting must be >= 1");
  if (settings.empty()) throw InputError("no measurement settings given");
  QuantumState rho = depolarize(state, p_depolarizing);
  const int n = rho.n;
  const std::size_t dim = rho.dim();

  // Single-qubit rotations mapping the basis eigenvectors onto |0>, |1>:
  // outcome bit b <-> eigenvalue (-1)^b of the measured basis operator.
  Eigen::Matrix2cd rx, ry, rz;
  const double s = 1.0 / std::sqrt(2.0);
  rx << s, s, s, -s;                                    // H
  ry << s, Complex(0, -s), s, Complex(0, s);            // H * Sdag
  rz.setIdentity();

  ExperimentDataset ds;
  ds.n_qubits = n;
  ds.provenance = "synthetic: depolarizing p=" + fmt("%g", p_depolarizing) +
                  ", mean shots/setting=" + std::to_string(shots_per_setting) +
                  ", seed=" + std::to_string(rng_seed);
  ds.records.reserve(settings.size());

  for (std::size_t si = 0; si < settings.size(); ++si) {
    const std::string& bases = settings[si].bases;
    check_setting_string(bases, n);
    std::vector<Eigen::Matrix2cd> us;
    us.reserve(n);
    for (int q = 1; q <= n; ++q)
      us.push_back(bases[q - 1] == 'X' ? rx : bases[q - 1] == 'Y' ? ry : rz);
    QuantumState rotated = apply_local_unitaries(rho, us);
    Eigen::VectorXd probs(dim);
    if (rotated.pure) {
      probs = rotated.amps.cwiseAbs2();
    } else {
      probs = rotated.rho.diagonal().real();
    }
    double tot = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (probs[j] < 0) probs[j] = 0;
      tot += probs[j];
    }
    if (std::abs(tot - 1.0) > 1e-6)
      throw InputError("outcome probabilities do not sum to 1");
    probs /= tot;

    std::mt19937_64 rng(mix_seed(rng_seed, static_cast<std::uint64_t>(si)));
    std::poisson_distribution<long long> poi(static_cast<double>(shots_per_setting));
    long long remaining = poi(rng);
    while (remaining == 0) remaining = poi(rng);  // every record needs a nonzero count
    CountsRecord rec;
    rec.setting = bases;
    double mass_left = 1.0;
    for (std::size_t j = 0; j < dim && remaining > 0; ++j) {
      long long c;
      if (j + 1 == dim || mass_left <= probs[j] + 1e-15) {
        c = remaining;
      } else {
        double pj = std::clamp(probs[j] / mass_left, 0.0, 1.0);
        std::binomial_distribution<long long> bin(remaining, pj);
        c = bin(rng);
      }
      mass_left -= probs[j];
      remaining -= c;
      if (c > 0) {
        std::string outcome(n, '0');
        for (int q = 1; q <= n; ++q)
          if (j & (std::size_t{1} << (n - q))) outcome[q - 1] = '1';
        rec.counts[outcome] = c;
      }
    }
    ds.records.push_back(std::move(rec));
  }
  return normalize_dataset(std::move(ds));
}

TomographyResult linear_inversion_tomography(const ExperimentDataset& ds) {
  const int n = ds.n_qubits;
  if (n < 1 || n > 6) throw InputError("tomography supports 1..6 qubits");
  if (ds.exact_mode())
    throw InputError("tomography needs raw counts records, not exact expectation values");
  std::set<std::string> have;
  for (const auto& rec : ds.records) have.insert(rec.setting);
  std::vector<std::string> missing;
  for (const auto& s : full_tomography_settings(n))
    if (!have.count(s.bases)) missing.push_back(s.bases);
  if (!missing.empty()) {
    std::ostringstream os;
    os << "tomography needs all " << static_cast<long long>(std::pow(3.0, n))
       << " settings; missing " << missing.size() << ":";
    std::size_t shown = std::min<std::size_t>(missing.size(), 12);
    for (std::size_t i = 0; i < shown; ++i) os << ' ' << missing[i];
    if (missing.size() > shown) os << " ...";
    throw CoverageError(os.str());
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<int> idx(n, 0);
  std::string word(n, 'I');
  for (;;) {
    for (int q = 0; q < n; ++q) word[q] = letters[idx[q]];
    PauliOperator p = parse_pauli(word);
    rho += expectation_point(ds, p) * dense_matrix(p);
    int q = n - 1;
    while (q >= 0 && idx[q] == 3) idx[q--] = 0;
    if (q < 0) break;
    ++idx[q];
  }
  rho /= static_cast<double>(dim);
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  TomographyResult out;
  out.rho.n = n;
  out.rho.pure = false;
  out.rho.rho = std::move(rho);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  return out;
}

CertReport certification_report(const ExperimentDataset& raw, const TargetSpec& target,
                                const IdTable& id, const ReportOptions& opts) {
  ExperimentDataset ds = normalize_dataset(raw);
  if (ds.records.empty() && ds.exact.empty())
    throw CoverageError("dataset contains no measurement records");
  if (target.state.n != ds.n_qubits || id.n() != ds.n_qubits)
    throw InputError("dataset, target state, and ID must share one qubit count");

  CertReport rep;
  rep.state_name = target.name;
  rep.id = id;
  rep.cls = check_id(id);
  const int m = id.m();
  const int n = id.n();

  // Per-row expectations. In counts mode, sigma of alpha comes from one MC run
  // over the full functional (correlations between rows sharing a setting are
  // then handled exactly); per-row sigmas still come from row-wise MC.
  auto alpha_of = [&id, m](const ExperimentDataset& d) {
    double a = 0;
    for (int i = 0; i < m; ++i) a += id.lambda(i) * expectation_point(d, id.rows[i]);
    return a;
  };
  rep.row_values.reserve(m);
  double alpha = 0, quad = 0;
  for (int i = 0; i < m; ++i) {
    Measured mi = expectation_from_counts(ds, id.rows[i], opts.mc_cycles,
                                          mix_seed(opts.rng_seed, 1000 + i));
    rep.row_values.push_back(mi);
    alpha += id.lambda(i) * mi.value;
    quad += mi.sigma * mi.sigma;
  }
  rep.alpha_exp = alpha;
  if (ds.exact_mode()) {
    if (ds.reported_alpha_sigma) {
      rep.alpha_sigma = *ds.reported_alpha_sigma;
      rep.sigma_source = "reported";
    } else {
      rep.alpha_sigma = std::sqrt(quad);
      rep.sigma_source = "quadrature";
    }
  } else {
    rep.alpha_sigma = poisson_mc(ds, alpha_of, opts.mc_cycles, opts.rng_seed);
    rep.sigma_source = "poisson_mc";
  }

  rep.alpha_qm = m;
  if (rep.cls.whole && rep.cls.sign < 0) {
    rep.alpha_lhvt = lhvt_bound(id);
    rep.lhvt_is_theorem = true;
  } else if (n <= 5) {
    rep.alpha_lhvt = lhvt_max_bruteforce(id);
    rep.lhvt_is_theorem = false;
  } else {
    rep.alpha_lhvt = m;  // no obstruction known; conservative
    rep.lhvt_is_theorem = false;
  }
  if (rep.alpha_sigma > 0) {
    rep.violation_sigmas = (rep.alpha_exp - rep.alpha_lhvt) / rep.alpha_sigma;
  } else {
    rep.violation_sigmas =
        rep.alpha_exp > rep.alpha_lhvt ? std::numeric_limits<double>::infinity() : 0.0;
  }

  rep.f_id = fidelity_bound_id(rep.alpha_exp, m, rep.alpha_sigma, rep.cls.r);

  // GoSG bound from the target's generating set, when every generator is covered.
  if (target.generators && static_cast<int>(target.generators->size()) == n) {
    try {
      std::vector<Measured> gv;
      for (std::size_t gi = 0; gi < target.generators->size(); ++gi)
        gv.push_back(expectation_from_counts(ds, (*target.generators)[gi], opts.mc_cycles,
                                             mix_seed(opts.rng_seed, 2000 + gi)));
      rep.f_gosg = fidelity_bound_gosg(gv, n);
    } catch (const CoverageError&) {
    }
  }

  // Full stabilizer-group average, when the target is a stabilizer state and
  // every element is covered.
  if (target.state.pure && n <= 6) {
    try {
      StabilizerGroup sg = state_stabilizer(target.state);
      if (sg.k() == n) {
        std::vector<Measured> ev;
        for (std::size_t ei = 0; ei < sg.elements.size(); ++ei)
          ev.push_back(expectation_from_counts(ds, sg.elements[ei], opts.mc_cycles,
                                               mix_seed(opts.rng_seed, 3000 + ei)));
        rep.f_sg = fidelity_sg(ev, n);
      }
    } catch (const std::exception&) {
    }
  }

  // Tomographic fidelity when all 3^n settings are present (counts mode only).
  if (!ds.exact_mode()) {
    std::set<std::string> have;
    for (const auto& rec : ds.records) have.insert(rec.setting);
    bool all = true;
    for (const auto& s : full_tomography_settings(n))
      if (!have.count(s.bases)) {
        all = false;
        break;
      }
    if (all) {
      TomographyResult tr = linear_inversion_tomography(ds);
      rep.tomo_min_eigenvalue = tr.min_eigenvalue;
      auto qst_of = [&target](const ExperimentDataset& d) {
        return fidelity(target.state, linear_inversion_tomography(d).rho);
      };
      FidelityBound fb;
      fb.method = "QST";
      fb.value = fidelity(target.state, tr.rho);
      fb.clamped = std::clamp(fb.value, 0.0, 1.0);
      fb.sigma = poisson_mc(ds, qst_of, opts.mc_cycles, mix_seed(opts.rng_seed, 4000));
      fb.subspace_only = false;
      rep.f_qst = fb;
    }
  }

  // Witness rows: analytic class bound when the ID pins a unique state, then
  // any cached numeric class bounds the caller supplies.
  std::optional<double> gamma_for_tolerance;
  if (rep.cls.r == 1) {
    try {
      std::vector<int> ls;
      for (int i = 0; i < m; ++i) ls.push_back(id.lambda(i));
      EigenprojectorResult ep = joint_eigenprojector(id.rows, ls);
      if (ep.pure) {
        WitnessBound wb = witness_gamma_analytic(id, *ep.pure);
        rep.witnesses.push_back({wb.class_label, wb.gamma, wb.source,
                                 wb.gamma - rep.alpha_exp, rep.alpha_sigma});
        gamma_for_tolerance = wb.gamma;
      }
    } catch (const std::exception&) {
    }
  }
  for (const auto& [label, g] : opts.numeric_gammas) {
    rep.witnesses.push_back({label, g, "numeric", g - rep.alpha_exp, rep.alpha_sigma});
    if (!gamma_for_tolerance || g > *gamma_for_tolerance) gamma_for_tolerance = g;
  }
  if (gamma_for_tolerance)
    rep.tolerance = noise_tolerance(m, *gamma_for_tolerance, rep.cls.r);

  for (const auto& s : plan_settings(id.rows)) rep.settings_plan.push_back(s.bases);
  return rep;
}

std::string report_summary(const CertReport& r) {
  std::ostringstream os;
  os << "Certification report: " << r.state_name << " (N=" << r.id.n() << ")\n";
  os << "ID rows (M=" << r.id.m() << "):";
  for (int i = 0; i < r.id.m(); ++i)
    os << ' ' << (r.id.lambda(i) > 0 ? '+' : '-') << format_pauli(r.id.rows[i]);
  os << "  [" << (r.cls.whole ? "whole" : "partial") << ", "
     << (r.cls.sign < 0 ? "negative" : "positive")
     << (r.cls.entangled ? ", entangled" : "") << (r.cls.critical ? ", critical" : "")
     << "]\n";
  os << "alpha = " << fmt("%.4f", r.alpha_exp) << " +/- " << fmt("%.4f", r.alpha_sigma)
     << " (sigma: " << r.sigma_source << ")   QM max " << fmt("%g", r.alpha_qm)
     << ", LHVT max " << fmt("%g", r.alpha_lhvt)
     << (r.lhvt_is_theorem ? "" : " (brute force)") << "\n";
  if (r.alpha_exp > r.alpha_lhvt && r.alpha_sigma > 0) {
    os << "Bell: violation by " << fmt("%.1f", r.violation_sigmas) << "σ\n";
  } else if (r.alpha_exp > r.alpha_lhvt) {
    os << "Bell: violated (exact values, no sigma)\n";
  } else {
    os << "Bell: no violation (alpha within the LHVT bound)\n";
  }
  auto fline = [&os](const char* name, const FidelityBound& f) {
    os << "  " << name << " = " << fmt("%.4f", f.value);
    if (f.sigma > 0) os << " +/- " << fmt("%.4f", f.sigma);
    if (f.subspace_only) os << "  (bounds overlap with a rank>1 subspace)";
    os << "\n";
  };
  os << "Fidelity bounds:\n";
  fline("F_ID  ", r.f_id);
  if (r.f_gosg) fline("F_GoSG", *r.f_gosg);
  if (r.f_sg) fline("F_SG  ", *r.f_sg);
  if (r.f_qst) fline("F_QST ", *r.f_qst);
  if (r.tomo_min_eigenvalue)
    os << "  (linear-inversion rho, lowest eigenvalue " << fmt("%.4f", *r.tomo_min_eigenvalue)
       << ")\n";
  if (!r.witnesses.empty()) {
    os << "Entanglement witnesses (<W> = gamma - alpha; negative excludes the class):\n";
    for (const auto& w : r.witnesses) {
      os << "  class " << w.class_label << ": gamma = " << fmt("%.4f", w.gamma) << " ("
         << w.source << "), <W> = " << fmt("%.4f", w.value);
      if (w.sigma > 0) os << " +/- " << fmt("%.4f", w.sigma);
      os << " -> " << (w.value < 0 ? "excluded" : "not excluded") << "\n";
    }
  }
  if (r.tolerance)
    os << "White-noise tolerance: p_max = " << fmt("%.4f", r.tolerance->p_max) << "\n";
  os << "Minimal settings (" << r.settings_plan.size() << "):";
  for (const auto& s : r.settings_plan) os << ' ' << s;
  os << "\n";
  return os.str();
}

}  // namespace idcert
