// pprobe: pressure-gradient probes for divergence-free velocity fields.
//
// Subcommands: gen, verify <lemma>, pressure, simulate, report.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pprobe/campaign.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pressure-gradient probes for divergence-free velocity fields", "pprobe"};
    app.require_subcommand(1);

    std::string config_path;
    pprobe::RunConfig overrides;  // values staged by flags
    bool has_seed = false, has_n = false, has_box = false, has_order = false, has_out = false,
         has_format = false, has_field = false, has_kmax = false, has_census = false,
         has_threads = false, has_nu = false, has_tfinal = false, has_initial = false,
         has_amplitude = false, has_dt = false;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    auto* oseed = app.add_option("--seed", overrides.seed, "campaign seed");
    auto* on = app.add_option("--grid-n", overrides.grid_n, "grid points per axis");
    auto* obox = app.add_option("--box-l", overrides.box, "periodic box length");
    auto* oorder = app.add_option("--order", overrides.order, "base quadrature order");
    auto* oout = app.add_option("--out", overrides.out_dir, "output directory");
    auto* oformat = app.add_option("--format", overrides.format, "csv|json")
                        ->check(CLI::IsMember({"csv", "json"}));
    auto* ofield = app.add_option("--field", overrides.field, "field name (random or analytic)");
    auto* okmax = app.add_option("--k-max", overrides.k_max, "band limit of random fields");
    auto* oamp = app.add_option("--amplitude", overrides.amplitude, "field amplitude");
    auto* ocensus = app.add_option("--census-fields", overrides.census_fields, "census size");
    auto* othreads = app.add_option("--threads", overrides.threads, "worker threads (0 = auto)");
    auto* onu = app.add_option("--nu", overrides.sim.nu, "viscosity (0 or 1)");
    auto* otf = app.add_option("--t-final", overrides.sim.t_final, "simulation end time");
    auto* odt = app.add_option("--dt", overrides.sim.dt, "time step (0 = auto)");
    auto* oinit = app.add_option("--initial", overrides.sim.initial, "initial data name");

    auto* gen = app.add_subcommand("gen", "generate a solenoidal grid field (DFF1)");
    std::string lemma;
    auto* verify = app.add_subcommand("verify", "run one bound-check census");
    verify->add_option("lemma", lemma, "check id: 2.1 2.2 2.3 2.4 2.5 3.1 3.2 thm1.1")->required();
    auto* pressure = app.add_subcommand("pressure", "pressure-gradient routes and cross-validation");
    auto* simulate = app.add_subcommand("simulate", "periodic-box integrator with monitors");
    std::vector<std::string> report_inputs;
    auto* report = app.add_subcommand("report", "aggregate check CSVs into plot data");
    report->add_option("inputs", report_inputs, "input CSV files");

    CLI11_PARSE(app, argc, argv);

    has_seed = oseed->count() > 0;
    has_n = on->count() > 0;
    has_box = obox->count() > 0;
    has_order = oorder->count() > 0;
    has_out = oout->count() > 0;
    has_format = oformat->count() > 0;
    has_field = ofield->count() > 0;
    has_kmax = okmax->count() > 0;
    has_amplitude = oamp->count() > 0;
    has_census = ocensus->count() > 0;
    has_threads = othreads->count() > 0;
    has_nu = onu->count() > 0;
    has_tfinal = otf->count() > 0;
    has_dt = odt->count() > 0;
    has_initial = oinit->count() > 0;

    pprobe::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = pprobe::load_config(config_path);
        if (has_seed) {
            cfg.seed = overrides.seed;
            cfg.sim.seed = overrides.seed;
        }
        if (has_n) {
            cfg.grid_n = overrides.grid_n;
            cfg.sim.n = overrides.grid_n;
        }
        if (has_box) {
            cfg.box = overrides.box;
            cfg.sim.box = overrides.box;
        }
        if (has_order) cfg.order = overrides.order;
        if (has_out) cfg.out_dir = overrides.out_dir;
        if (has_format) cfg.format = overrides.format;
        if (has_field) cfg.field = overrides.field;
        if (has_kmax) {
            cfg.k_max = overrides.k_max;
            cfg.sim.k_max = overrides.k_max;
        }
        if (has_amplitude) {
            cfg.amplitude = overrides.amplitude;
            cfg.sim.amplitude = overrides.amplitude;
        }
        if (has_census) cfg.census_fields = overrides.census_fields;
        if (has_threads) cfg.threads = overrides.threads;
        if (has_nu) cfg.sim.nu = overrides.sim.nu;
        if (has_tfinal) cfg.sim.t_final = overrides.sim.t_final;
        if (has_dt) cfg.sim.dt = overrides.sim.dt;
        if (has_initial) cfg.sim.initial = overrides.sim.initial;

        if (gen->parsed()) return pprobe::cmd_gen(cfg, std::cout);
        if (verify->parsed()) return pprobe::cmd_verify(lemma, cfg, std::cout);
        if (pressure->parsed()) return pprobe::cmd_pressure(cfg, std::cout);
        if (simulate->parsed()) return pprobe::cmd_simulate(cfg, std::cout);
        if (report->parsed()) return pprobe::cmd_report(report_inputs, cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "pprobe: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
