#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pprobe/flux.hpp"
#include "pprobe/pressure.hpp"
#include "pprobe/rng.hpp"
#include "pprobe/semigroup.hpp"
#include "pprobe/sim.hpp"

namespace pprobe {

/// Fully determines a verification run; equal configs produce byte-identical
/// numerical output.
struct RunConfig {
    uint64_t seed = 1;
    int grid_n = 32;
    double box = 6.283185307179586476925287;
    int order = 8;
    std::string out_dir = ".";
    std::string format = "csv";  // csv | json

    // field spec
    std::string field = "random";
    std::map<std::string, double> field_params;
    int k_max = 3;
    double amplitude = 1.0;

    // census shape
    int census_fields = 100;
    int census_regions = 20;
    int w_samples = 1024;
    int n_lo = -2, n_hi = 2;
    int trunc_k = 3;

    // pressure routes
    int assembly_n_lo = -8, assembly_n_hi = 8;
    double r_excl = 1e-3;
    double r_outer = 0.0;  // 0: derived from the field support
    bool allow_truncated_coulomb = false;
    std::vector<std::string> pressure_methods{"spectral", "coulomb", "block_sum"};

    // simulation
    SimConfig sim;
    int checkpoint_every = 0;

    int threads = 0;  // 0: hardware, capped by PPROBE_THREADS

    uint64_t item_seed(uint64_t index) const { return derive_seed(seed, index); }
};

RunConfig load_config(const std::string& path);
std::string config_hash(const RunConfig& cfg);
int thread_count(const RunConfig& cfg);

/// Deterministic parallel map: item i writes its own slot; reduction order is
/// fixed regardless of the thread count.
void parallel_for(int n_items, int threads, const std::function<void(int)>& fn);

/// One lemma census (ids: 2.1, 2.2, 2.3, 2.4, 2.5). Fields are the seeded
/// band-limited family; regions derive from per-item seeds.
std::vector<BoundCheck> run_lemma_census(const std::string& lemma, const RunConfig& cfg,
                                         int n_fields);

struct CensusSummary {
    std::string lemma;
    int checks = 0;
    int unstable = 0;
    int vacuous = 0;
    double max_ratio = 0.0;
    double max_ratio_half = 0.0;  // over the first half of the field census
    bool all_stable() const { return unstable == 0; }
};
CensusSummary summarize(const std::string& lemma, const std::vector<BoundCheck>& checks,
                        int n_fields, int per_field);

void write_checks_csv(const std::string& path, const std::vector<BoundCheck>& checks);
void write_series_csv(const std::string& path, const RatioSeries& series);

/// The smoothed step profile that attains the sharp heat-gradient constant:
/// a band-limited square wave pre-smoothed by e^{t_s Delta} on a 1d grid.
ScalarGrid smoothed_step_profile(int n, double L, double t_smooth);

// command implementations (exit codes: 0 ok / stable, 1 checks unstable,
// 2 usage or configuration error)
int cmd_gen(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const std::string& lemma, const RunConfig& cfg, std::ostream& out);
int cmd_pressure(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_report(const std::vector<std::string>& inputs, const RunConfig& cfg, std::ostream& out);

}  // namespace pprobe
