// Benchmarks the OpenMP kernels against their serial reference implementations
// and checks that both produce identical results.
#include <chrono>
#include <cstring>
#include <iostream>

#include "idcert/gamma.hpp"
#include "idcert/json_io.hpp"
#include "idcert/measurement.hpp"

using namespace idcert;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Timed {
  double serial_ms = 0;
  double parallel_ms = 0;
  bool identical = false;
};

void print(const std::string& name, const Timed& t) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n",
              name.c_str(), t.serial_ms, t.parallel_ms,
              t.parallel_ms > 0 ? t.serial_ms / t.parallel_ms : 0.0,
              t.identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  bool all_ok = true;

  // LHVT brute force over all 2^{3N} classical assignments.
  {
    IdTable id = make_id({parse_pauli("ZZII"), parse_pauli("ZIXX"), parse_pauli("IZYY"),
                          parse_pauli("YXXY"), parse_pauli("YXYX")},
                         {1, 1, -1, 1, 1});
    double t0 = now_ms();
    double serial = lhvt_max_bruteforce(id, false);
    double t1 = now_ms();
    double par = lhvt_max_bruteforce(id, true);
    double t2 = now_ms();
    Timed t{t1 - t0, t2 - t1, serial == par};
    all_ok &= t.identical;
    print("lhvt_max_bruteforce", t);
  }

  // ID search over all row subsets of a stabilizer group.
  {
    StabilizerGroup group = state_stabilizer(make_named_state("ghz", quick ? 4 : 5));
    double t0 = now_ms();
    auto serial = find_ids_in_group(group, group.n + 1, {}, false);
    double t1 = now_ms();
    auto par = find_ids_in_group(group, group.n + 1, {}, true);
    double t2 = now_ms();
    bool same = serial.size() == par.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i)
      same = serial[i].rows == par[i].rows && serial[i].lambdas == par[i].lambdas;
    Timed t{t1 - t0, t2 - t1, same};
    all_ok &= same;
    print("find_ids_in_group", t);
  }

  // Multistart Nelder-Mead maximization.
  {
    IdTable id = make_id({parse_pauli("ZZII"), parse_pauli("ZIXX"), parse_pauli("IZYY"),
                          parse_pauli("YXXY"), parse_pauli("YXYX")},
                         {1, 1, -1, 1, 1});
    StateClass cls{"C_lin", make_named_state("c_lin", 4)};
    int starts = quick ? 8 : 100;
    double t0 = now_ms();
    GammaEstimate serial = gamma_numeric(id, cls, starts, 7, false);
    double t1 = now_ms();
    GammaEstimate par = gamma_numeric(id, cls, starts, 7, true);
    double t2 = now_ms();
    bool same = serial.value == par.value && serial.best_parameters == par.best_parameters &&
                serial.n_converged == par.n_converged;
    Timed t{t1 - t0, t2 - t1, same};
    all_ok &= same;
    print("gamma_numeric", t);
  }

  // Poisson Monte Carlo resampling of a synthetic dataset.
  {
    QuantumState state = make_named_state("ghz", 3);
    ExperimentDataset ds = simulate_experiment(
        state, 0.1, full_tomography_settings(3), quick ? 2000 : 20000, 11);
    PauliOperator obs = parse_pauli("XXX");
    auto functional = [&obs](const ExperimentDataset& d) {
      return expectation_point(d, obs);
    };
    int cycles = quick ? 50 : 400;
    double t0 = now_ms();
    double serial = poisson_mc(ds, functional, cycles, 13, nullptr, false);
    double t1 = now_ms();
    double par = poisson_mc(ds, functional, cycles, 13, nullptr, true);
    double t2 = now_ms();
    Timed t{t1 - t0, t2 - t1, serial == par};
    all_ok &= t.identical;
    print("poisson_mc", t);
  }

  std::printf("%s\n", all_ok ? "all kernels match their serial reference"
                             : "kernel mismatch detected");
  return all_ok ? 0 : 1;
}
