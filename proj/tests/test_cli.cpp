#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr merged
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + IDCERT_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t nread = 0;
  while ((nread = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), nread);
  int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string data(const std::string& rel) { return std::string(IDCERT_DATA_DIR) + "/" + rel; }

fs::path tmp_dir() {
  fs::path d = fs::temp_directory_path() / "idcert_cli_tests";
  fs::create_directories(d);
  return d;
}

std::string write_tmp(const std::string& name, const std::string& content) {
  fs::path p = tmp_dir() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string tmp_path(const std::string& name) { return (tmp_dir() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("find-ids enumerates a state's census") {
  RunResult r = run_cli("find-ids " + data("states/ghz3.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "found 14 IDs (M <= 4) in a group with 8 elements"));

  RunResult whole = run_cli("find-ids " + data("states/ghz3.json") + " --whole");
  CHECK(contains(whole.output, "found 2 IDs"));

  RunResult neg = run_cli("find-ids " + data("states/ghz3.json") + " --whole --negative");
  CHECK(neg.exit_code == 0);
  CHECK(contains(neg.output, "found 1 IDs"));
  CHECK(contains(neg.output, "ID4^3_w negative"));
  CHECK(contains(neg.output, "critical"));
  CHECK(contains(neg.output, "settings=4"));
}

TEST_CASE("find-ids accepts a generator list") {
  std::string gens = write_tmp("ghz3_gens.json", R"(["ZZI","IZZ","XXX"])");
  RunResult r = run_cli("find-ids " + gens);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "found 14 IDs (M <= 4) in a group with 8 elements"));
}

TEST_CASE("find-ids filters on the linear cluster group") {
  RunResult ent = run_cli("find-ids " + data("states/c_lin.json") + " --entangled --max-m 5");
  CHECK(ent.exit_code == 0);
  CHECK(contains(ent.output, "found 196 IDs (M <= 5)"));

  std::string out = tmp_path("clin_ids.json");
  RunResult r = run_cli("find-ids " + data("states/c_lin.json") +
                        " --whole --negative --entangled --max-m 5 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "found 8 IDs (M <= 5)"));
  CHECK(contains(r.output, "ID5^4_w negative"));

  nlohmann::json j = nlohmann::json::parse(slurp(out));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 8);
  for (const auto& e : j) {
    CHECK(e["whole"] == true);
    CHECK(e["negative"] == true);
    CHECK(e["entangled"] == true);
    CHECK(e["rows"].size() == 5);
  }
}

TEST_CASE("find-ids exits 3 when nothing survives the filters") {
  std::string basis = write_tmp("basis000.json", R"({"basis":"000"})");
  RunResult r = run_cli("find-ids " + basis + " --entangled");
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "found 0 IDs"));
}

TEST_CASE("certify reproduces the linear-cluster table") {
  std::string out = tmp_path("clin_report.json");
  std::string plot = tmp_path("clin_plot.csv");
  RunResult r = run_cli("certify " + data("datasets/clin_exact.json") + " --state " +
                        data("states/c_lin.json") + " --id " + data("ids/id5_4_w.json") +
                        " --out " + out + " --plot-csv " + plot);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "Certification report: c_lin(4) (N=4)"));
  CHECK(contains(r.output, "alpha = 3.2400 +/- 0.0500 (sigma: reported)"));
  CHECK(contains(r.output, "QM max 5, LHVT max 3"));
  CHECK(contains(r.output, "Bell: violation by 4.8σ"));
  CHECK(contains(r.output, "F_ID   = 0.5600 +/- 0.0125"));
  CHECK(contains(r.output, "F_GoSG = 0.4800"));
  CHECK(contains(r.output, "F_SG   = 0.6569"));
  CHECK(contains(r.output, "-> excluded"));
  CHECK(contains(r.output, "p_max = 0.4000"));

  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["alpha"]["exp"].get<double>() == doctest::Approx(3.24));
  CHECK(j["alpha"]["violation_sigmas"].get<double>() == doctest::Approx(4.8));
  CHECK(j["fidelity"]["id"]["value"].get<double>() == doctest::Approx(0.56));
  CHECK(slurp(plot).rfind("kind,label,value,sigma\n", 0) == 0);
}

TEST_CASE("certify can pick the ID itself") {
  RunResult r = run_cli("certify " + data("datasets/ghz3_exact.json") + " --state " +
                        data("states/ghz3.json") + " --id auto");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "alpha = 2.5500 +/- 0.1764 (sigma: quadrature)"));
  CHECK(contains(r.output, "Bell: violation by 3.1σ"));
  CHECK(contains(r.output, "F_ID   = 0.6375"));
}

TEST_CASE("certify reports a coverage gap for a truncated dataset") {
  nlohmann::json j = nlohmann::json::parse(slurp(data("datasets/clin_exact.json")));
  nlohmann::json pruned = nlohmann::json::array();
  for (const auto& e : j["exact"])
    if (e["observable"] != "YXYX") pruned.push_back(e);
  j["exact"] = pruned;
  std::string truncated = write_tmp("clin_truncated.json", j.dump(2));
  RunResult r = run_cli("certify " + truncated + " --state " + data("states/c_lin.json") +
                        " --id " + data("ids/id5_4_w.json"));
  CHECK(r.exit_code == 4);
  CHECK(contains(r.output, "coverage error"));
  CHECK(contains(r.output, "YXYX"));
}

TEST_CASE("gamma requires a seed and a catalog that fits the ID") {
  RunResult noseed = run_cli("gamma --id " + data("ids/id4_4_p.json") + " --starts 2");
  CHECK(noseed.exit_code == 2);
  CHECK(contains(noseed.output, "gamma needs --seed"));

  RunResult n3 = run_cli("gamma --id " + data("ids/id4_3_w.json") + " --starts 2 --seed 1");
  CHECK(n3.exit_code == 2);
  CHECK(contains(n3.output, "pass --classes"));
}

TEST_CASE("gamma prints the class table and warns on few starts") {
  RunResult r = run_cli("gamma --id " + data("ids/id4_4_p.json") + " --starts 1 --seed 0");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "upper bound may be loose"));
  CHECK(contains(r.output, "class"));
  CHECK(contains(r.output, "product"));
  CHECK(contains(r.output, "C_lin"));

  std::string catalog = write_tmp(
      "mermin_classes.json", R"({"classes":[{"label":"product","state":{"basis":"000"}}]})");
  RunResult custom = run_cli("gamma --id " + data("ids/id4_3_w.json") +
                             " --classes " + catalog + " --starts 2 --seed 1");
  CHECK(custom.exit_code == 0);
  CHECK(contains(custom.output, "product"));
}

TEST_CASE("gamma output is identical across thread counts") {
  std::string a = tmp_path("gamma_t1.json");
  std::string b = tmp_path("gamma_t2.json");
  std::string base = "gamma --id " + data("ids/id4_4_p.json") + " --starts 6 --seed 3";
  RunResult r1 = run_cli(base + " --threads 1 --out " + a);
  RunResult r2 = run_cli(base + " --threads 2 --out " + b);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  nlohmann::json j = nlohmann::json::parse(slurp(a));
  CHECK(j["classes"].size() == 23);

  // The gamma output feeds straight into certify as numeric witness rows.
  RunResult cert = run_cli("certify " + data("datasets/ghz4_exact.json") + " --state " +
                           data("states/ghz4.json") + " --id " + data("ids/id5_4_p.json") +
                           " --numeric-gammas " + a);
  CHECK(cert.exit_code == 0);
  CHECK(contains(cert.output, "(numeric)"));
  CHECK(contains(cert.output, "class product:"));
}

TEST_CASE("simulate requires a seed and is reproducible") {
  RunResult noseed = run_cli("simulate " + data("states/ghz3.json") + " --id " +
                             data("ids/id4_3_w.json") + " --shots 100");
  CHECK(noseed.exit_code == 2);
  CHECK(contains(noseed.output, "simulate needs --seed"));

  std::string s1 = tmp_path("sim_a.json");
  std::string s2 = tmp_path("sim_b.json");
  std::string s3 = tmp_path("sim_c.json");
  std::string base = "simulate " + data("states/ghz3.json") + " --id " +
                     data("ids/id4_3_w.json") + " --p 0.05 --shots 2000";
  CHECK(run_cli(base + " --seed 11 --out " + s1).exit_code == 0);
  CHECK(run_cli(base + " --seed 11 --out " + s2).exit_code == 0);
  CHECK(run_cli(base + " --seed 12 --out " + s3).exit_code == 0);
  CHECK(slurp(s1) == slurp(s2));
  CHECK(slurp(s1) != slurp(s3));
  nlohmann::json j = nlohmann::json::parse(slurp(s1));
  CHECK(j["n"] == 3);
  REQUIRE(j.contains("records"));
  CHECK(j["records"].size() == 4);  // the Bell plan for the four-row ID
}

TEST_CASE("simulate then certify closes the loop") {
  std::string ds = tmp_path("sim_roundtrip.json");
  CHECK(run_cli("simulate " + data("states/ghz3.json") + " --id " + data("ids/id4_3_w.json") +
                " --p 0.05 --shots 20000 --seed 7 --out " + ds)
            .exit_code == 0);
  RunResult r = run_cli("certify " + ds + " --state " + data("states/ghz3.json") + " --id " +
                        data("ids/id4_3_w.json") + " --cycles 40 --seed 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "sigma: poisson_mc"));
  CHECK(contains(r.output, "Bell: violation by"));
  CHECK(contains(r.output, "-> excluded"));
}

TEST_CASE("heavy noise defeats the certificate") {
  std::string ds = tmp_path("sim_noisy.json");
  CHECK(run_cli("simulate " + data("states/c_lin.json") + " --id " + data("ids/id5_4_w.json") +
                " --p 0.45 --shots 20000 --seed 21 --out " + ds)
            .exit_code == 0);
  RunResult r = run_cli("certify " + ds + " --state " + data("states/c_lin.json") + " --id " +
                        data("ids/id5_4_w.json") + " --cycles 40 --seed 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "Bell: no violation"));
  CHECK(contains(r.output, "-> not excluded"));
}

TEST_CASE("tomography round trip through the CLI") {
  std::string ds = tmp_path("tomo_ds.json");
  CHECK(run_cli("simulate " + data("states/ghz3.json") +
                " --settings auto --full-tomo --p 0 --shots 4000 --seed 9 --out " + ds)
            .exit_code == 0);
  std::string out = tmp_path("tomo_out.json");
  RunResult r = run_cli("tomo " + ds + " --state " + data("states/ghz3.json") + " --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "lowest eigenvalue of the linear-inversion rho:"));
  auto pos = r.output.find("F_QST = ");
  REQUIRE(pos != std::string::npos);
  double f = std::stod(r.output.substr(pos + 8));
  CHECK(f > 0.97);
  CHECK(f < 1.01);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["fidelity"].get<double>() == doctest::Approx(f).epsilon(1e-4));
  CHECK(j.contains("min_eigenvalue"));
  CHECK(j["rho_re"].size() == 8);

  // Remove one setting: the gap is reported by name.
  nlohmann::json dj = nlohmann::json::parse(slurp(ds));
  nlohmann::json kept = nlohmann::json::array();
  for (const auto& rec : dj["records"])
    if (rec["setting"] != "ZZZ") kept.push_back(rec);
  dj["records"] = kept;
  std::string partial = write_tmp("tomo_partial.json", dj.dump(2));
  RunResult gap = run_cli("tomo " + partial);
  CHECK(gap.exit_code == 4);
  CHECK(contains(gap.output, "missing 1: ZZZ"));
}

TEST_CASE("malformed input exits with the input-error code") {
  std::string bad = write_tmp("bad.json", "{ this is not json");
  CHECK(run_cli("find-ids " + bad).exit_code == 2);
  CHECK(run_cli("certify " + bad + " --state " + data("states/ghz3.json")).exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("help text lists every subcommand") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub : {"find-ids", "certify", "gamma", "simulate", "tomo"})
    CHECK(contains(r.output, sub));
}
