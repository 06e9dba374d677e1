// Drives the installed pprobe binary end to end (path via PPROBE_BIN) and
// the campaign layer's file outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pprobe/campaign.hpp"
#include "pprobe/grid.hpp"

using namespace pprobe;
namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* p = std::getenv("PPROBE_BIN");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_out") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen: determinism and zero band limit") {
    TempDir d1("gen1"), d2("gen2"), d3("gen3");
    CHECK(run_cli("--seed 1 --grid-n 16 --k-max 3 --out " + d1.str() + " gen") == 0);
    CHECK(run_cli("--seed 1 --grid-n 16 --k-max 3 --out " + d2.str() + " gen") == 0);
    CHECK(slurp(d1.file("field.dff1")) == slurp(d2.file("field.dff1")));

    CHECK(run_cli("--seed 1 --grid-n 16 --k-max 0 --out " + d3.str() + " gen") == 0);
    GridField z = read_dff1(d3.file("field.dff1"));
    CHECK(z.sup_norm() == 0.0);

    GridField g = read_dff1(d1.file("field.dff1"));
    SpectralGrid ws(g);
    CHECK(divergence_residual(g, ws) < 1e-10 * g.sup_norm());
}

TEST_CASE("verify: unknown lemma id is a usage error") {
    TempDir d("bad");
    CHECK(run_cli("--out " + d.str() + " verify 9.9") == 2);
}

TEST_CASE("verify 2.1: constant field gives all-zero ratios, exit 0") {
    TempDir d("v21c");
    CHECK(run_cli("--field constant --census-fields 2 --out " + d.str() +
                  " --order 4 verify 2.1") == 0);
    auto csv = slurp(d.file("verify_2.1.csv"));
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == bound_check_csv_header());
    int rows = 0;
    while (std::getline(ss, line)) {
        ++rows;
        CHECK(line.find(",0,") != std::string::npos);  // ratio column is zero
        CHECK(line.back() == '1');                     // stable
    }
    CHECK(rows == 2 * 20);
    auto j = nlohmann::json::parse(slurp(d.file("verify_2.1.json")));
    CHECK(j["max_ratio"].get<double>() == 0.0);
    CHECK(j["all_stable"].get<bool>());
}

TEST_CASE("verify 2.3: small random census writes stable checks") {
    TempDir d("v23");
    RunConfig cfg;
    cfg.out_dir = d.str();
    cfg.census_fields = 3;
    cfg.w_samples = 512;
    cfg.order = 6;
    std::ostringstream log;
    CHECK(cmd_verify("2.3", cfg, log) == 0);
    auto j = nlohmann::json::parse(slurp(d.file("verify_2.3.json")));
    CHECK(j["checks"].get<int>() == 3 * 10);
    CHECK(j["all_stable"].get<bool>());
    CHECK(j["max_ratio"].get<double>() > 0.0);
}

TEST_CASE("verify determinism: identical configs give identical bytes") {
    TempDir d1("det1"), d2("det2");
    RunConfig cfg;
    cfg.census_fields = 2;
    cfg.w_samples = 256;
    cfg.order = 4;
    std::ostringstream log;
    cfg.out_dir = d1.str();
    CHECK(cmd_verify("2.2", cfg, log) == 0);
    cfg.out_dir = d2.str();
    CHECK(cmd_verify("2.2", cfg, log) == 0);
    CHECK(slurp(d1.file("verify_2.2.csv")) == slurp(d2.file("verify_2.2.csv")));
}

TEST_CASE("pressure: abc spectral gradient at the origin") {
    TempDir d("pabc");
    CHECK(run_cli("--field abc --grid-n 64 --out " + d.str() + " pressure") == 2);  // coulomb refused
    RunConfig cfg;
    cfg.field = "abc";
    cfg.grid_n = 64;
    cfg.out_dir = d.str();
    cfg.pressure_methods = {"spectral"};
    std::ostringstream log;
    CHECK(cmd_pressure(cfg, log) == 0);
    auto j = nlohmann::json::parse(slurp(d.file("pressure_report.json")));
    auto g0 = j["spectral"]["grad_p_origin"];
    for (int k = 0; k < 3; ++k) CHECK(std::abs(g0[k].get<double>() + 1.0) < 1e-6);
    CHECK(j["spectral"]["residual_rel"].get<double>() < 1e-8);
}

TEST_CASE("pressure: bump cross-validation emits plot data") {
    TempDir d("pbump");
    RunConfig cfg;
    cfg.field = "curl_potential";
    cfg.field_params = {{"cx", 2.5}, {"cy", 0.7}, {"cz", -0.4}, {"radius", 1.5},
                        {"mx", 0.3},  {"my", 1.0}, {"mz", 0.2}};
    cfg.grid_n = 48;
    cfg.order = 10;
    cfg.n_lo = -1;
    cfg.n_hi = 1;
    cfg.assembly_n_lo = -5;
    cfg.assembly_n_hi = 5;
    cfg.w_samples = 512;
    cfg.out_dir = d.str();
    std::ostringstream log;
    CHECK(cmd_pressure(cfg, log) == 0);
    auto j = nlohmann::json::parse(slurp(d.file("pressure_report.json")));
    CHECK(j["cross_validation"]["rel_disagreement"].get<double>() < 0.02);
    CHECK(j["block_sum"].contains("near_abs"));
    CHECK(fs::exists(d.file("pressure_partial_sums_vs_n.txt")));
    CHECK(fs::exists(d.file("pressure_ratio_vs_n.txt")));
}

TEST_CASE("simulate: header row at T=0, trajectory schema, determinism") {
    TempDir d("sim0");
    CHECK(run_cli("--out " + d.str() + " --t-final 0 --initial taylor_green --grid-n 16 simulate") ==
          0);
    auto csv = slurp(d.file("trajectory.csv"));
    std::stringstream ss(csv);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,sup_u,sup_gradu,sup_gradP,energy,r1,r2,r3,div_residual");
    int rows = 0;
    std::string line;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 1);

    TempDir d1("simA"), d2("simB");
    std::string args = "--initial random --seed 7 --grid-n 16 --t-final 0.2 --nu 1 simulate";
    CHECK(run_cli("--out " + d1.str() + " " + args) == 0);
    CHECK(run_cli("--out " + d2.str() + " " + args) == 0);
    CHECK(slurp(d1.file("trajectory.csv")) == slurp(d2.file("trajectory.csv")));
    CHECK(slurp(d1.file("simulate_summary.json")) == slurp(d2.file("simulate_summary.json")));
}

TEST_CASE("simulate: checkpoints carry the DFF1 payload and sidecar") {
    TempDir d("simck");
    RunConfig cfg;
    cfg.out_dir = d.str();
    cfg.checkpoint_every = 2;
    cfg.sim.initial = "taylor_green";
    cfg.sim.n = 16;
    cfg.sim.t_final = 0.2;
    cfg.sim.dt = 0.05;
    std::ostringstream log;
    CHECK(cmd_simulate(cfg, log) == 0);
    CHECK(fs::exists(d.file("checkpoint_2.dff1")));
    GridField g = read_dff1(d.file("checkpoint_2.dff1"));
    CHECK(g.n == 16);
    auto side = nlohmann::json::parse(slurp(d.file("checkpoint_2.json")));
    CHECK(side["t"].get<double>() == doctest::Approx(0.1));
    CHECK(side["nu"].get<double>() == 1.0);
    CHECK(side.contains("config_hash"));
}

TEST_CASE("report: aggregation and error paths") {
    TempDir d("rep");
    CHECK(run_cli("--out " + d.str() + " report") == 2);  // no inputs

    // build two small censuses and merge them
    RunConfig cfg;
    cfg.census_fields = 2;
    cfg.w_samples = 256;
    cfg.order = 4;
    cfg.n_lo = -1;
    cfg.n_hi = 1;
    std::ostringstream log;
    cfg.out_dir = d.file("a");
    CHECK(cmd_verify("2.3", cfg, log) == 0);
    cfg.out_dir = d.file("b");
    cfg.seed = 2;
    CHECK(cmd_verify("2.3", cfg, log) == 0);

    RunConfig rep;
    rep.out_dir = d.str();
    std::vector<std::string> inputs{d.file("a") + "/verify_2.3.csv",
                                    d.file("b") + "/verify_2.3.csv"};
    CHECK(cmd_report(inputs, rep, log) == 0);
    auto table = slurp(d.file("report_max_ratio.txt"));
    CHECK(table.find("2.3 ") != std::string::npos);

    // merged max equals the max of the parts
    auto ja = nlohmann::json::parse(slurp(d.file("a") + "/verify_2.3.json"));
    auto jb = nlohmann::json::parse(slurp(d.file("b") + "/verify_2.3.json"));
    double expect = std::max(ja["max_ratio"].get<double>(), jb["max_ratio"].get<double>());
    std::stringstream ss(table);
    std::string lemma;
    double got = 0.0;
    ss >> lemma >> got;
    CHECK(got == doctest::Approx(expect).epsilon(1e-15));
    CHECK(fs::exists(d.file("report_ratio_vs_n_2.3.txt")));
}

TEST_CASE("config file loads and flags win") {
    TempDir d("cfg");
    std::ofstream f(d.file("c.json"));
    f << R"({"seed": 3, "grid_n": 16, "k_max": 2, "out_dir": ")" << d.str() << R"("})";
    f.close();
    RunConfig c = load_config(d.file("c.json"));
    CHECK(c.seed == 3);
    CHECK(c.grid_n == 16);
    CHECK(c.k_max == 2);
    // the hash covers the numerically relevant fields
    RunConfig c2 = c;
    c2.seed = 4;
    CHECK(config_hash(c) != config_hash(c2));
}
