// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests of the fluxdec binary: exit codes, output formats,
// determinism and the --output-dir contract.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "decoherence.hpp"
#include "estimation.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("FLUXDEC_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string config_path() {
    const char* dir = std::getenv("FLUXDEC_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/default.json";
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fluxdec_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = cli_path() + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ostringstream so, se;
    so << std::ifstream(out).rdbuf();
    se << std::ifstream(err).rdbuf();
    r.out = so.str();
    r.err = se.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ostringstream os;
    os << std::ifstream(p).rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream(p) << content;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("budget: table on stdout, json + envelopes in the output dir") {
    TempDir tmp;
    const auto r = run("budget -c " + config_path() + " -o " + (tmp.path / "out").string(),
                       tmp.path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("relaxation budget") != std::string::npos);
    const json j = json::parse(slurp(tmp.path / "out" / "budget.json"));
    double fractions = 0.0;
    for (const auto& c : j["t1"]["channels"]) fractions += c["fraction"].get<double>();
    CHECK(std::abs(fractions - 1.0) < 1e-9);
    CHECK(fs::exists(tmp.path / "out" / "envelope_ramsey.csv"));
    CHECK(fs::exists(tmp.path / "out" / "envelope_echo.csv"));
    const std::string env = slurp(tmp.path / "out" / "envelope_ramsey.csv");
    CHECK(env.rfind("tau_s,envelope", 0) == 0);
}

TEST_CASE("all relaxation channels off reports null T1 and still exits 0") {
    TempDir tmp;
    std::string args = "budget -c " + config_path() + " -o " +
                       (tmp.path / "out").string();
    for (const char* ch : {"flux_z_1f", "flux_x_1f", "biasline_z", "biasline_x",
                           "purcell", "ohmic_flux_z", "ohmic_flux_x", "ohmic_charge"}) {
        args += std::string(" --set noise.channels.") + ch + "=false";
    }
    const auto r = run(args, tmp.path);
    CHECK(r.exit_code == 0);
    const json j = json::parse(slurp(tmp.path / "out" / "budget.json"));
    CHECK(j["t1"]["total_s"].is_null());
    CHECK(j["t1"]["channels"].empty());
}

TEST_CASE("config errors exit with code 2 and an anchored message") {
    TempDir tmp;
    write(tmp.path / "bad.json", "{\"device\": {}}");
    const auto r = run("budget -c " + (tmp.path / "bad.json").string(), tmp.path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("config") != std::string::npos);

    write(tmp.path / "unknown.json", slurp(config_path()));
    const auto r2 = run("budget -c " + (tmp.path / "unknown.json").string() +
                            " --set noise.mystery_knob=1.0",
                        tmp.path);
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("mystery_knob") != std::string::npos);
}

TEST_CASE("sweep: deterministic, honors sample count, single sample matches budget") {
    TempDir tmp;
    const auto r1 = run("sweep -c " + config_path() + " -o " + (tmp.path / "a").string(),
                        tmp.path);
    CHECK(r1.exit_code == 0);
    const std::string a = slurp(tmp.path / "a" / "sweep.csv");
    CHECK(count_lines(a) == 82);  // header + 81 rows

    const auto r2 = run("sweep -c " + config_path() + " -o " + (tmp.path / "b").string(),
                        tmp.path);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(tmp.path / "b" / "sweep.csv") == a);  // byte identical

    // One-point sweep pinned to the budget bias reproduces the budget values.
    const auto r3 = run(
        "sweep -c " + config_path() +
            " --set sweep.samples=1 --set sweep.min=0.5172366680639607"
            " --set sweep.max=0.5172366680639607 -o " + (tmp.path / "c").string(),
        tmp.path);
    CHECK(r3.exit_code == 0);
    const auto rb = run("budget -c " + config_path() + " -o " +
                            (tmp.path / "d").string(),
                        tmp.path);
    CHECK(rb.exit_code == 0);
    const json bj = json::parse(slurp(tmp.path / "d" / "budget.json"));
    std::istringstream rows(slurp(tmp.path / "c" / "sweep.csv"));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    // t1_total_s is the 4th column, tphi columns are the last two.
    std::vector<std::string> cells;
    std::istringstream rc(row);
    std::string cell;
    while (std::getline(rc, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() >= 14);
    CHECK(std::stod(cells[3]) ==
          doctest::Approx(bj["t1"]["total_s"].get<double>()).epsilon(1e-9));
    CHECK(std::stod(cells[12]) ==
          doctest::Approx(bj["tphi"]["ramsey_closed_form_s"].get<double>())
              .epsilon(1e-9));
    CHECK(std::stod(cells[13]) ==
          doctest::Approx(bj["tphi"]["echo_closed_form_s"].get<double>()).epsilon(1e-9));
}

TEST_CASE("anneal: row count equals the requested samples") {
    TempDir tmp;
    const auto r = run("anneal -c " + config_path() +
                           " --set anneal.samples=13 -o " + (tmp.path / "o").string(),
                       tmp.path);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(tmp.path / "o" / "anneal.csv");
    CHECK(count_lines(csv) == 14);
    CHECK(csv.rfind("s,delta_hz,eps_hz,a_eps,a_delta,a_delta_eps", 0) == 0);
}

TEST_CASE("fit: dataset error paths map to exit 3") {
    TempDir tmp;
    write(tmp.path / "empty.csv", "");
    auto r = run("fit --kind flux-noise -c " + config_path() + " --data " +
                     (tmp.path / "empty.csv").string(),
                 tmp.path);
    CHECK(r.exit_code == 3);

    write(tmp.path / "nocol.csv", "phi_z,phi_x,t_phi_s,sigma_s\n0.51,0.32,1e-7,1e-8\n");
    r = run("fit --kind flux-noise -c " + config_path() + " --data " +
                (tmp.path / "nocol.csv").string(),
            tmp.path);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("protocol") != std::string::npos);
}

TEST_CASE("fit: unidentifiable dataset maps to exit 4") {
    using namespace fluxdec;
    const QubitCurves curves = testsupport::default_curves();
    DephasingModelParams params;
    params.alpha = 1.0;
    params.omega_low = kTwoPi * 10.0;
    params.t_typ = 1e-7;
    const double eta0 = eta_factor(0, 1.0, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, 1.0, 0.0, 0.0);
    std::ostringstream csv;
    csv << "phi_z,phi_x,t_phi_s,sigma_s,protocol\n";
    for (double phi_x : {0.30, 0.35, 0.40}) {
        const double sym = symmetry_point(curves, phi_x);
        const QubitPoint p = compute_point(curves, {sym, phi_x});
        const double t = predict_tphi(p, 1.769e-10, 5.776e-11, 0.0, Protocol::ramsey,
                                      params, eta0, eta1);
        for (int k = 0; k < 2; ++k) {
            csv << sym << "," << phi_x << "," << t << "," << 0.05 * t << ",ramsey\n";
        }
    }
    TempDir tmp;
    write(tmp.path / "flat.csv", csv.str());
    const auto r = run("fit --kind flux-noise -c " + config_path() + " --data " +
                           (tmp.path / "flat.csv").string(),
                       tmp.path);
    CHECK(r.exit_code == 4);
}

TEST_CASE("fit: asymmetry report") {
    TempDir tmp;
    std::ostringstream csv;
    csv << "phi_x,phi_z_sym,sigma\n";
    for (int i = 0; i < 9; ++i) {
        const double px = 0.05 + 0.05 * i;
        csv << px << "," << fluxdec::symmetry_point(0.069, px) << ",0.0005\n";
    }
    write(tmp.path / "sym.csv", csv.str());
    const auto r = run("fit --kind asymmetry --data " + (tmp.path / "sym.csv").string() +
                           " -o " + (tmp.path / "o").string(),
                       tmp.path);
    CHECK(r.exit_code == 0);
    const json j = json::parse(slurp(tmp.path / "o" / "fit_report.json"));
    CHECK(j["estimates"]["asymmetry_d"].get<double>() ==
          doctest::Approx(0.069).epsilon(1e-4));
}

TEST_CASE("validate: pass by default, fail on a doctored exponent") {
    TempDir tmp;
    const std::string fast = " --set validate.n_traces=300";
    const auto ok = run("validate -c " + config_path() + fast + " -o " +
                            (tmp.path / "v").string(),
                        tmp.path);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    const std::string csv = slurp(tmp.path / "v" / "validate_ramsey.csv");
    CHECK(csv.rfind("tau_s,mc_envelope,mc_stderr,analytic_envelope", 0) == 0);
    CHECK(fs::exists(tmp.path / "v" / "validate_echo.csv"));

    const auto bad = run("validate -c " + config_path() + fast +
                             " --set validate.alpha_mc=0.7",
                         tmp.path);
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("output-dir contract: nothing written outside it") {
    TempDir tmp;
    const fs::path work = tmp.path / "work";
    fs::create_directories(work);
    const fs::path out = tmp.path / "only_here";
    const std::string cmd = "cd " + work.string() + " && " + cli_path() + " sweep -c " +
                            config_path() + " -o " + out.string() +
                            " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "sweep.csv"));
    CHECK(fs::is_empty(work));
}

}  // TEST_SUITE
