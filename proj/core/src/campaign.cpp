#include "pprobe/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pprobe/format.hpp"

namespace pprobe {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

namespace {

void read_params(const json& j, const char* key, std::map<std::string, double>& out) {
    if (!j.contains(key)) return;
    for (auto it = j.at(key).begin(); it != j.at(key).end(); ++it)
        out[it.key()] = it.value().get<double>();
}

json sim_to_json(const SimConfig& s) {
    json j;
    j["n"] = s.n;
    j["box"] = s.box;
    j["nu"] = s.nu;
    j["dt"] = s.dt;
    j["cfl"] = s.cfl;
    j["t_final"] = s.t_final;
    j["diag_every"] = s.diag_every;
    j["disable_nonlinearity"] = s.disable_nonlinearity;
    j["initial"] = s.initial;
    j["params"] = s.params;
    j["seed"] = s.seed;
    j["k_max"] = s.k_max;
    j["amplitude"] = s.amplitude;
    j["load_dff1"] = s.load_dff1;
    return j;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["grid_n"] = c.grid_n;
    j["box"] = c.box;
    j["order"] = c.order;
    j["format"] = c.format;
    j["field"] = c.field;
    j["field_params"] = c.field_params;
    j["k_max"] = c.k_max;
    j["amplitude"] = c.amplitude;
    j["census_fields"] = c.census_fields;
    j["census_regions"] = c.census_regions;
    j["w_samples"] = c.w_samples;
    j["n_lo"] = c.n_lo;
    j["n_hi"] = c.n_hi;
    j["trunc_k"] = c.trunc_k;
    j["assembly_n_lo"] = c.assembly_n_lo;
    j["assembly_n_hi"] = c.assembly_n_hi;
    j["r_excl"] = c.r_excl;
    j["r_outer"] = c.r_outer;
    j["allow_truncated_coulomb"] = c.allow_truncated_coulomb;
    j["pressure_methods"] = c.pressure_methods;
    j["checkpoint_every"] = c.checkpoint_every;
    j["sim"] = sim_to_json(c.sim);
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(f);
    RunConfig c;
    c.seed = j.value("seed", c.seed);
    c.grid_n = j.value("grid_n", c.grid_n);
    c.box = j.value("box", c.box);
    c.order = j.value("order", c.order);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.format = j.value("format", c.format);
    c.field = j.value("field", c.field);
    read_params(j, "field_params", c.field_params);
    c.k_max = j.value("k_max", c.k_max);
    c.amplitude = j.value("amplitude", c.amplitude);
    c.census_fields = j.value("census_fields", c.census_fields);
    c.census_regions = j.value("census_regions", c.census_regions);
    c.w_samples = j.value("w_samples", c.w_samples);
    c.n_lo = j.value("n_lo", c.n_lo);
    c.n_hi = j.value("n_hi", c.n_hi);
    c.trunc_k = j.value("trunc_k", c.trunc_k);
    c.assembly_n_lo = j.value("assembly_n_lo", c.assembly_n_lo);
    c.assembly_n_hi = j.value("assembly_n_hi", c.assembly_n_hi);
    c.r_excl = j.value("r_excl", c.r_excl);
    c.r_outer = j.value("r_outer", c.r_outer);
    c.allow_truncated_coulomb = j.value("allow_truncated_coulomb", c.allow_truncated_coulomb);
    if (j.contains("pressure_methods"))
        c.pressure_methods = j.at("pressure_methods").get<std::vector<std::string>>();
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    c.threads = j.value("threads", c.threads);
    if (j.contains("sim")) {
        const json& s = j.at("sim");
        c.sim.n = s.value("n", c.sim.n);
        c.sim.box = s.value("box", c.sim.box);
        c.sim.nu = s.value("nu", c.sim.nu);
        c.sim.dt = s.value("dt", c.sim.dt);
        c.sim.cfl = s.value("cfl", c.sim.cfl);
        c.sim.t_final = s.value("t_final", c.sim.t_final);
        c.sim.diag_every = s.value("diag_every", c.sim.diag_every);
        c.sim.disable_nonlinearity = s.value("disable_nonlinearity", c.sim.disable_nonlinearity);
        c.sim.initial = s.value("initial", c.sim.initial);
        read_params(s, "params", c.sim.params);
        c.sim.seed = s.value("seed", c.sim.seed);
        c.sim.k_max = s.value("k_max", c.sim.k_max);
        c.sim.amplitude = s.value("amplitude", c.sim.amplitude);
        c.sim.load_dff1 = s.value("load_dff1", c.sim.load_dff1);
    }
    return c;
}

std::string config_hash(const RunConfig& cfg) {
    std::string s = config_to_json(cfg).dump();
    uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char b : s) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int thread_count(const RunConfig& cfg) {
    int n = cfg.threads;
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("PPROBE_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(int n_items, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(1, threads), std::max(1, n_items));
    if (threads == 1) {
        for (int i = 0; i < n_items; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < n_items; i += threads) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// census regions
// ---------------------------------------------------------------------------

namespace {

void random_frame(SplitMix64& rng, Vec3& v1, Vec3& v2) {
    do {
        v1 = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
    } while (v1.norm() < 1e-8);
    v1 = v1.normalized();
    Vec3 g;
    do {
        g = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
        g -= v1 * g.dot(v1);
    } while (g.norm() < 1e-8);
    v2 = g.normalized();
}

struct RectSpec {
    Vec3 corner, e1, e2;
};

RectSpec random_rect(uint64_t seed) {
    SplitMix64 rng(seed);
    Vec3 center{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    double l1 = rng.uniform(0.5, 3.0), l2 = rng.uniform(0.5, 3.0);
    Vec3 v1, v2;
    random_frame(rng, v1, v2);
    RectSpec r;
    r.e1 = v1 * l1;
    r.e2 = v2 * l2;
    r.corner = center - r.e1 * 0.5 - r.e2 * 0.5;
    return r;
}

}  // namespace

std::vector<BoundCheck> run_lemma_census(const std::string& lemma, const RunConfig& cfg,
                                         int n_fields) {
    std::vector<std::vector<BoundCheck>> slots(static_cast<size_t>(n_fields));
    int threads = thread_count(cfg);
    int order = cfg.order;

    auto field_for = [&](int i) {
        if (cfg.field != "random") return make_standard_field(cfg.field, cfg.field_params);
        return to_analytic(random_mode_field(cfg.item_seed(static_cast<uint64_t>(i)), cfg.k_max,
                                             cfg.amplitude, cfg.box));
    };

    if (lemma == "2.1") {
        parallel_for(n_fields, threads, [&](int i) {
            AnalyticField f = field_for(i);
            for (int r = 0; r < cfg.census_regions; ++r) {
                uint64_t rs = derive_seed(cfg.item_seed(static_cast<uint64_t>(i)), 1000 + static_cast<uint64_t>(r));
                RectSpec spec = random_rect(rs);
                Surface rect = make_rectangle(spec.corner, spec.e1, spec.e2);
                auto sampler = sample_rectangle(spec.corner, spec.e1, spec.e2, cfg.w_samples,
                                                "rect" + std::to_string(r));
                slots[static_cast<size_t>(i)].push_back(
                    rectangle_bound_check(f, rect, sampler, order));
            }
        });
    } else if (lemma == "2.2") {
        parallel_for(n_fields, threads, [&](int i) {
            AnalyticField f = field_for(i);
            uint64_t base = cfg.item_seed(static_cast<uint64_t>(i));
            for (int r = 0; r < 2; ++r) {
                SplitMix64 rng(derive_seed(base, 2000 + static_cast<uint64_t>(r)));
                Surface d = make_disc(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.5), +1);
                d.name = "disc" + std::to_string(r);
                slots[static_cast<size_t>(i)].push_back(
                    surface_bound_check(f, d, sample_surface(d, cfg.w_samples), order));

                SplitMix64 rng2(derive_seed(base, 3000 + static_cast<uint64_t>(r)));
                double r1 = rng2.uniform(0.3, 1.0);
                Surface a = make_annulus(rng2.uniform(-1.0, 1.0), r1, r1 + rng2.uniform(0.3, 1.5), +1);
                a.name = "annulus" + std::to_string(r);
                slots[static_cast<size_t>(i)].push_back(
                    surface_bound_check(f, a, sample_surface(a, cfg.w_samples), order));

                SplitMix64 rng3(derive_seed(base, 4000 + static_cast<uint64_t>(r)));
                double lo = rng3.uniform(-1.0, 0.0);
                Surface c = make_cylinder(lo, lo + rng3.uniform(0.5, 2.0), rng3.uniform(0.5, 2.0), +1);
                c.name = "cyl" + std::to_string(r);
                slots[static_cast<size_t>(i)].push_back(
                    surface_bound_check(f, c, sample_surface(c, cfg.w_samples), order));
            }
        });
    } else if (lemma == "2.3") {
        parallel_for(n_fields, threads, [&](int i) {
            AnalyticField f = field_for(i);
            for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
                for (BlockKind k : {BlockKind::cylinder, BlockKind::shell}) {
                    Block b = dyadic_block(k, n, cfg.trunc_k);
                    slots[static_cast<size_t>(i)].push_back(
                        charge_bound_check(f, b, sample_block(b, cfg.w_samples), order));
                }
            }
        });
    } else if (lemma == "2.4") {
        parallel_for(n_fields, threads, [&](int i) {
            AnalyticField f = field_for(i);
            for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
                Block c = dyadic_block(BlockKind::cylinder, n, cfg.trunc_k);
                auto [lo, hi] = h_range_on_block(c);
                for (double frac : {0.5, 0.25})
                    slots[static_cast<size_t>(i)].push_back(
                        level_cap_flux_check(f, c, lo + frac * (hi - lo), cfg.w_samples, order));
                Block b = dyadic_block(BlockKind::shell, n, cfg.trunc_k);
                auto [blo, bhi] = h_range_on_block(b);
                double base = std::max(0.0, blo);
                slots[static_cast<size_t>(i)].push_back(
                    level_cap_flux_check(f, b, base + 0.5 * (bhi - base), cfg.w_samples, order));
            }
        });
    } else if (lemma == "2.5") {
        int vol_order = std::max(4, order - 2);
        parallel_for(n_fields, threads, [&](int i) {
            AnalyticField f = field_for(i);
            for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
                for (BlockKind k : {BlockKind::cylinder, BlockKind::shell}) {
                    Block b = dyadic_block(k, n, cfg.trunc_k);
                    slots[static_cast<size_t>(i)].push_back(
                        dipole_bound_check(f, b, sample_block(b, cfg.w_samples), vol_order));
                }
            }
        });
    } else {
        throw std::invalid_argument("run_lemma_census: unknown lemma id '" + lemma + "'");
    }

    std::vector<BoundCheck> flat;
    for (auto& s : slots) flat.insert(flat.end(), s.begin(), s.end());
    return flat;
}

CensusSummary summarize(const std::string& lemma, const std::vector<BoundCheck>& checks,
                        int n_fields, int per_field) {
    CensusSummary s;
    s.lemma = lemma;
    s.checks = static_cast<int>(checks.size());
    size_t half_rows = static_cast<size_t>(n_fields / 2) * static_cast<size_t>(per_field);
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        if (!c.refinement_stable) ++s.unstable;
        if (c.vacuous) ++s.vacuous;
        s.max_ratio = std::max(s.max_ratio, c.ratio);
        if (i < half_rows) s.max_ratio_half = std::max(s.max_ratio_half, c.ratio);
    }
    return s;
}

void write_checks_csv(const std::string& path, const std::vector<BoundCheck>& checks) {
    std::string out = bound_check_csv_header() + "\n";
    for (const auto& c : checks) out += to_csv_row(c) + "\n";
    write_text(path, out);
}

void write_series_csv(const std::string& path, const RatioSeries& series) {
    std::string out = "t,ratio\n";
    for (size_t i = 0; i < series.t.size(); ++i)
        out += fmt_g17(series.t[i]) + "," + fmt_g17(series.ratio[i]) + "\n";
    write_text(path, out);
}

ScalarGrid smoothed_step_profile(int n, double L, double t_smooth) {
    ScalarGrid g({n, 1, 1}, {L, L, L});
    SpectralGrid ws(g);
    std::vector<std::complex<double>> spec(ws.spec_size(), {0.0, 0.0});
    double kb = 6.283185307179586476925287 / L;
    int band = n / 3;
    for (int m = 1; m <= band; m += 2) {
        double k = kb * m;
        double amp = 4.0 / (3.14159265358979323846 * m) * std::exp(-k * k * t_smooth);
        // sin(kx) = -i/2 e^{ikx} + c.c.
        spec[static_cast<size_t>(m)] = std::complex<double>(0.0, -0.5 * amp);
    }
    return ws.inverse_scalar(spec);
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
    GridField g;
    if (cfg.field == "random") {
        g = random_solenoidal(cfg.seed, cfg.k_max, cfg.amplitude, cfg.grid_n, cfg.box);
    } else {
        AnalyticField f = make_standard_field(cfg.field, cfg.field_params);
        g = leray_project(sample_field(f, cfg.grid_n, cfg.box));
    }
    SpectralGrid ws(g);
    double sup = g.sup_norm();
    double res = divergence_residual(g, ws);
    double rel = sup > 0.0 ? res / sup : res;
    std::string path = out_path(cfg, "field.dff1");
    write_dff1(path, g);
    out << "wrote " << path << "\n";
    out << "divergence_residual_rel = " << fmt_g17(rel) << "\n";
    return 0;
}

namespace {

// ------------------------- semigroup verify paths -------------------------

ScalarGrid random_scalar_profile(uint64_t seed, int k_max, int n, double L) {
    GridField g = synthesize(random_mode_field(seed, k_max, 1.0, L), n);
    return extract_component(g, 0);
}

int verify_semigroup(const std::string& lemma, const RunConfig& cfg, std::ostream& out) {
    std::vector<BoundCheck> rows;
    int series_idx = 0;
    auto emit_series = [&](const RatioSeries& s, const std::string& field_name) {
        BoundCheck c = s.check;
        c.field = field_name;
        rows.push_back(c);
        write_series_csv(out_path(cfg, "verify_" + lemma + "_series" + std::to_string(series_idx++) + ".csv"),
                         s);
    };

    if (lemma == "3.1") {
        ScalarGrid step = smoothed_step_profile(4096, 32.0, 1e-4);
        emit_series(heat_gradient_bound_check(step, {0.25, 0.5, 1.0}), "smoothed_step");
        int n_profiles = std::min(cfg.census_fields, 12);
        for (int i = 0; i < n_profiles; ++i) {
            ScalarGrid f = random_scalar_profile(cfg.item_seed(static_cast<uint64_t>(i)), cfg.k_max,
                                                 cfg.grid_n, cfg.box);
            emit_series(heat_gradient_bound_check(f, {0.05, 0.15, 0.3, 0.6}),
                        "rand" + std::to_string(i));
        }
    } else if (lemma == "3.2") {
        ScalarGrid step = smoothed_step_profile(4096, 32.0, 1e-4);
        TimeDependentScalar worst{[step](double) { return step; }, step.max_abs()};
        emit_series(duhamel_sup_bound_check(worst, 0.0, {0.25, 1.0}, 256), "step_const(i)");
        emit_series(duhamel_gradient_bound_check(worst, 0.0, {0.25, 1.0}, 256), "step_const(ii)");
        int n_sources = std::min(cfg.census_fields, 8);
        for (int i = 0; i < n_sources; ++i) {
            uint64_t s = cfg.item_seed(static_cast<uint64_t>(i));
            ScalarGrid f = random_scalar_profile(derive_seed(s, 1), cfg.k_max, cfg.grid_n, cfg.box);
            ScalarGrid gprof = random_scalar_profile(derive_seed(s, 2), cfg.k_max, cfg.grid_n, cfg.box);
            double c = f.max_abs() + gprof.max_abs();
            TimeDependentScalar q{[f, gprof](double t) {
                                      ScalarGrid r = f;
                                      double cs = std::cos(2.0 * t), sn = std::sin(2.0 * t);
                                      for (size_t p = 0; p < r.data.size(); ++p)
                                          r.data[p] = cs * f.data[p] + sn * gprof.data[p];
                                      return r;
                                  },
                                  c};
            emit_series(duhamel_sup_bound_check(q, 0.0, {0.2, 0.5}, 128),
                        "rand" + std::to_string(i) + "(i)");
            emit_series(duhamel_gradient_bound_check(q, 0.0, {0.2, 0.5}, 128),
                        "rand" + std::to_string(i) + "(ii)");
        }
    }

    write_checks_csv(out_path(cfg, "verify_" + lemma + ".csv"), rows);
    CensusSummary s = summarize(lemma, rows, static_cast<int>(rows.size()), 1);
    json j;
    j["lemma"] = lemma;
    j["checks"] = s.checks;
    j["max_ratio"] = s.max_ratio;
    j["unstable"] = s.unstable;
    j["all_stable"] = s.all_stable();
    j["config_hash"] = config_hash(cfg);
    write_text(out_path(cfg, "verify_" + lemma + ".json"), j.dump(2) + "\n");
    out << "lemma " << lemma << ": " << s.checks << " checks, max ratio " << fmt_g17(s.max_ratio)
        << (s.all_stable() ? ", all stable" : ", UNSTABLE") << "\n";
    return s.all_stable() ? 0 : 1;
}

// --------------------------- theorem verify path ---------------------------

int verify_theorem(const RunConfig& cfg, std::ostream& out) {
    std::vector<BoundCheck> rows;
    if (cfg.field != "random") {
        // one named analytic field at two resolutions
        AnalyticField f = make_standard_field(cfg.field, cfg.field_params);
        GridField uc = leray_project(sample_field(f, cfg.grid_n, cfg.box));
        GridField uf = leray_project(sample_field(f, 2 * cfg.grid_n, cfg.box));
        SpectralGrid wc(uc), wf(uf);
        BoundCheck cc = theorem_check_spectral(uc, wc);
        BoundCheck c = theorem_check_spectral(uf, wf);
        c.field = cfg.field;
        c.ratio_coarse = cc.ratio;
        double big = std::max(c.ratio, cc.ratio);
        c.vacuous = big < kVacuousRatio;
        c.refinement_stable = c.vacuous || std::abs(c.ratio - cc.ratio) <= kStableDrift * big;
        rows.push_back(c);
    } else {
        // spectral census runs serially: one FFT workspace pair per item
        for (int i = 0; i < cfg.census_fields; ++i) {
            ModeField mf = random_mode_field(cfg.item_seed(static_cast<uint64_t>(i)), cfg.k_max,
                                             cfg.amplitude, cfg.box);
            rows.push_back(theorem_check_modes(mf, cfg.grid_n, 2 * cfg.grid_n));
        }
    }
    int n_fields = static_cast<int>(rows.size());

    // block-sum route against the spectral solve on decaying fields
    for (int b = 0; b < 2; ++b) {
        BumpSpec spec;
        spec.center = b == 0 ? Vec3{2.5, 0.7, -0.4} : Vec3{1.8, -0.5, 0.9};
        spec.radius = 1.5;
        spec.moment = b == 0 ? Vec3{0.3, 1.0, 0.2} : Vec3{1.0, -0.4, 0.8};
        AnalyticField f = make_bump_field({spec});
        double reach = spec.center.norm() + spec.radius;
        SampleLattice lat{spec.center - Vec3{spec.radius, spec.radius, spec.radius},
                          spec.center + Vec3{spec.radius, spec.radius, spec.radius}, 48};
        double su = sup_norm(f, lat), sg = grad_sup_norm(f, lat);
        AxialAssembly asem = dyadic_axial_sum(f, su, sg, cfg.assembly_n_lo, cfg.assembly_n_hi,
                                              std::max(10, cfg.order), cfg.trunc_k, cfg.w_samples);

        double L = 4.0 * reach;
        int n = 2 * cfg.grid_n;
        double hstep = L / n;
        Vec3 offset{hstep * (n / 2), hstep * (n / 2), hstep * (n / 2)};
        GridField grid = leray_project(sample_field(translated(f, offset), n, L));
        SpectralGrid ws(grid);
        SpectralPressure sp = grad_pressure_spectral(grid, ws);
        double spectral_dp1 = sp.grad_p.at(n / 2, n / 2, n / 2, 0);

        BoundCheck c;
        c.lemma = "thm1.1-route";
        c.field = "bump" + std::to_string(b);
        c.region = "blocks_vs_torus";
        c.lhs = std::abs(asem.axial_physical());
        c.rhs_factor = std::abs(spectral_dp1);
        c.ratio = c.rhs_factor > 0.0 ? c.lhs / c.rhs_factor : 0.0;
        c.refinement_stable = std::abs(c.ratio - 1.0) <= 0.05;
        c.order = cfg.order;
        rows.push_back(c);
    }

    write_checks_csv(out_path(cfg, "verify_thm1.1.csv"), rows);
    CensusSummary s = summarize("thm1.1", rows, n_fields, 1);
    json j;
    j["lemma"] = "thm1.1";
    j["checks"] = s.checks;
    j["max_ratio"] = s.max_ratio;
    j["max_ratio_half"] = s.max_ratio_half;
    j["unstable"] = s.unstable;
    j["all_stable"] = s.all_stable();
    j["config_hash"] = config_hash(cfg);
    write_text(out_path(cfg, "verify_thm1.1.json"), j.dump(2) + "\n");
    out << "thm1.1: " << s.checks << " checks, max beta " << fmt_g17(s.max_ratio)
        << (s.all_stable() ? ", all stable" : ", UNSTABLE") << "\n";
    return s.all_stable() ? 0 : 1;
}

}  // namespace

int cmd_verify(const std::string& lemma, const RunConfig& cfg, std::ostream& out) {
    if (lemma == "3.1" || lemma == "3.2") return verify_semigroup(lemma, cfg, out);
    if (lemma == "thm1.1") return verify_theorem(cfg, out);
    std::string id = lemma == "2.3c" || lemma == "cor2.3" ? "2.3" : lemma;
    if (id != "2.1" && id != "2.2" && id != "2.3" && id != "2.4" && id != "2.5") {
        out << "unknown lemma id '" << lemma
            << "' (know: 2.1 2.2 2.3 2.4 2.5 3.1 3.2 thm1.1)\n";
        return 2;
    }
    auto checks = run_lemma_census(id, cfg, cfg.census_fields);
    int per_field = cfg.census_fields > 0 ? static_cast<int>(checks.size()) / cfg.census_fields : 0;
    CensusSummary s = summarize(id, checks, cfg.census_fields, per_field);
    write_checks_csv(out_path(cfg, "verify_" + id + ".csv"), checks);
    json j;
    j["lemma"] = id;
    j["checks"] = s.checks;
    j["max_ratio"] = s.max_ratio;
    j["max_ratio_half"] = s.max_ratio_half;
    j["unstable"] = s.unstable;
    j["vacuous"] = s.vacuous;
    j["all_stable"] = s.all_stable();
    j["config_hash"] = config_hash(cfg);
    write_text(out_path(cfg, "verify_" + id + ".json"), j.dump(2) + "\n");
    out << "lemma " << id << ": " << s.checks << " checks, max ratio " << fmt_g17(s.max_ratio)
        << ", half-census " << fmt_g17(s.max_ratio_half)
        << (s.all_stable() ? ", all stable" : ", UNSTABLE") << "\n";
    return s.all_stable() ? 0 : 1;
}

int cmd_pressure(const RunConfig& cfg, std::ostream& out) {
    bool want_spectral = false, want_coulomb = false, want_blocks = false;
    for (const auto& m : cfg.pressure_methods) {
        if (m == "spectral") want_spectral = true;
        else if (m == "coulomb") want_coulomb = true;
        else if (m == "block_sum") want_blocks = true;
        else {
            out << "unknown pressure method '" << m << "'\n";
            return 2;
        }
    }

    AnalyticField f;
    bool have_analytic = cfg.field != "random";
    if (have_analytic) f = make_standard_field(cfg.field, cfg.field_params);
    bool decaying = have_analytic && f.compactly_supported();
    if ((want_coulomb || want_blocks) && !decaying && !cfg.allow_truncated_coulomb) {
        out << "coulomb/block_sum need a decaying field; pass allow_truncated_coulomb to force a "
               "truncated integral\n";
        return 2;
    }

    json rep;
    rep["field"] = cfg.field;
    rep["config_hash"] = config_hash(cfg);
    rep["kernel_note"] =
        "coulomb and block_sum use the un-normalized Newtonian kernel; physical values divide by 4*pi";

    double spectral_dp1 = 0.0;
    if (want_spectral) {
        GridField grid;
        Vec3 offset{0, 0, 0};
        int n = cfg.grid_n;
        double L = cfg.box;
        if (decaying) {
            double reach = f.support_center.norm() + f.support_radius;
            L = cfg.r_outer > 0.0 ? cfg.r_outer : 4.0 * reach;
            double hstep = L / n;
            offset = {hstep * (n / 2), hstep * (n / 2), hstep * (n / 2)};
            grid = leray_project(sample_field(translated(f, offset), n, L));
        } else if (have_analytic) {
            grid = leray_project(sample_field(f, n, L));
        } else {
            grid = random_solenoidal(cfg.seed, cfg.k_max, cfg.amplitude, n, L);
        }
        SpectralGrid ws(grid);
        SpectralPressure sp = grad_pressure_spectral(grid, ws);
        spectral_dp1 = sp.grad_p.at(n / 2, n / 2, n / 2, 0);
        Vec3 at0 = sp.grad_p.velocity(0, 0, 0);
        rep["spectral"]["residual_rel"] = sp.residual_rel;
        rep["spectral"]["grad_p_origin"] = {at0.x, at0.y, at0.z};
        Vec3 atc = sp.grad_p.velocity(n / 2, n / 2, n / 2);
        rep["spectral"]["grad_p_center"] = {atc.x, atc.y, atc.z};
        rep["spectral"]["sup"] = sp.grad_p.sup_norm();
        rep["spectral"]["n"] = n;
        rep["spectral"]["box"] = L;
    }

    if (want_coulomb && decaying) {
        double reach = f.support_center.norm() + f.support_radius;
        double r_outer = cfg.r_outer > 0.0 ? cfg.r_outer : 1.05 * reach;
        CoulombResult cr = grad_pressure_coulomb(f, {0, 0, 0}, r_outer, cfg.r_excl, cfg.order);
        CoulombResult cr2 = grad_pressure_coulomb(f, {0, 0, 0}, r_outer, cfg.r_excl, 2 * cfg.order);
        Vec3 phys = cr2.grad_physical();
        rep["coulomb"]["grad_p_origin_physical"] = {phys.x, phys.y, phys.z};
        Vec3 paper = cr2.grad_paper;
        rep["coulomb"]["grad_p_origin_paper"] = {paper.x, paper.y, paper.z};
        rep["coulomb"]["excl_ball_bound"] = cr2.excl_ball_bound;
        rep["coulomb"]["truncated"] = cr2.truncated;
        Vec3 drift = cr2.grad_physical() - cr.grad_physical();
        rep["coulomb"]["order_refinement_drift"] = drift.max_abs();
        if (want_spectral) {
            // spectral grid origin sits at box center after the embedding shift
            double denom = std::abs(spectral_dp1);
            rep["cross_validation"]["spectral_dp1"] = spectral_dp1;
            rep["cross_validation"]["coulomb_dp1_physical"] = phys.x;
            rep["cross_validation"]["rel_disagreement"] =
                denom > 0.0 ? std::abs(phys.x - spectral_dp1) / denom : 0.0;
        }
    }

    if (want_blocks && decaying) {
        double reach = f.support_center.norm() + f.support_radius;
        SampleLattice lat{f.support_center - Vec3{f.support_radius, f.support_radius, f.support_radius},
                          f.support_center + Vec3{f.support_radius, f.support_radius, f.support_radius},
                          48};
        (void)reach;
        double su = sup_norm(f, lat), sg = grad_sup_norm(f, lat);
        AxialAssembly a = dyadic_axial_sum(f, su, sg, cfg.assembly_n_lo, cfg.assembly_n_hi,
                                           std::max(10, cfg.order), cfg.trunc_k, cfg.w_samples);
        rep["block_sum"]["dp1_physical"] = a.axial_physical();
        rep["block_sum"]["total_paper"] = a.total;
        rep["block_sum"]["n0"] = a.n0;
        rep["block_sum"]["near_abs"] = a.near_abs;
        rep["block_sum"]["far_abs"] = a.far_abs;
        rep["block_sum"]["near_tail_est"] = a.near_tail_est;
        rep["block_sum"]["far_tail_est"] = a.far_tail_est;
        rep["block_sum"]["trunc_est"] = a.trunc_est;
        rep["block_sum"]["product_bound_ratio"] =
            su > 0.0 && sg > 0.0 ? std::abs(a.axial_physical()) / (su * sg) : 0.0;
        if (want_spectral && std::abs(spectral_dp1) > 0.0)
            rep["block_sum"]["rel_vs_spectral"] =
                std::abs(a.axial_physical() - spectral_dp1) / std::abs(spectral_dp1);

        // plot data: signed running partial sum and per-scale dipole ratios
        std::string psums;
        double acc = 0.0;
        for (size_t i = 0; i < a.ns.size(); ++i) {
            acc += (a.contrib_cyl[i] + a.contrib_shell[i]) / kFourPi;
            psums += std::to_string(a.ns[i]) + " " + fmt_g17(acc) + "\n";
        }
        write_text(out_path(cfg, "pressure_partial_sums_vs_n.txt"), psums);
        std::string ratios;
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            Block blk = dyadic_block(BlockKind::cylinder, n, cfg.trunc_k);
            BoundCheck c = dipole_bound_check(f, blk, sample_block(blk, cfg.w_samples),
                                              std::max(6, cfg.order - 2));
            ratios += std::to_string(n) + " " + fmt_g17(c.ratio) + "\n";
        }
        write_text(out_path(cfg, "pressure_ratio_vs_n.txt"), ratios);
    }

    std::string path = out_path(cfg, "pressure_report.json");
    write_text(path, rep.dump(2) + "\n");
    out << "wrote " << path << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    SimConfig sc = cfg.sim;
    std::string hash = config_hash(cfg);
    std::function<void(const Simulator&, int)> hook;
    if (cfg.checkpoint_every > 0) {
        RunConfig copy = cfg;
        hook = [copy, hash](const Simulator& sim, int s) {
            if (s % copy.checkpoint_every != 0) return;
            std::string base = (fs::path(copy.out_dir) / ("checkpoint_" + std::to_string(s))).string();
            write_dff1(base + ".dff1", sim.velocity());
            json side;
            side["t"] = sim.time();
            side["nu"] = sim.nu();
            side["config_hash"] = hash;
            write_text(base + ".json", side.dump(2) + "\n");
        };
        fs::create_directories(cfg.out_dir);
    }

    Trajectory traj;
    try {
        traj = run(sc, hook);
    } catch (const std::exception& e) {
        out << "simulation failed: " << e.what() << "\n";
        return 1;
    }

    std::string csv = "t,sup_u,sup_gradu,sup_gradP,energy,r1,r2,r3,div_residual\n";
    for (const auto& d : traj.rows)
        csv += fmt_g17(d.t) + "," + fmt_g17(d.sup_u) + "," + fmt_g17(d.sup_gradu) + "," +
               fmt_g17(d.sup_gradp) + "," + fmt_g17(d.energy) + "," + fmt_g17(d.r1) + "," +
               fmt_g17(d.r2) + "," + fmt_g17(d.r3) + "," + fmt_g17(d.div_residual) + "\n";
    write_text(out_path(cfg, "trajectory.csv"), csv);

    MonitorReport mr = monitor(traj);
    json j;
    j["beta_hat"] = mr.beta_hat;
    j["max_r2"] = mr.max_r2;
    j["max_r2_before_t0"] = mr.max_r2_before_t0;
    j["r2_within_9_8"] = mr.r2_ok;
    j["t0_estimate"] = mr.t0_estimate;
    j["beta2_hat"] = mr.beta2_hat;
    j["smallness_quantity"] = mr.cor13_quantity;  // |u0|_inf |u0|_2^2
    j["vacuous"] = mr.vacuous;
    j["energy_monotone"] = traj.energy_monotone;
    j["worst_energy_jump"] = traj.worst_energy_jump;
    j["reliable"] = mr.reliable;
    j["unreliable_time"] = mr.unreliable_time;
    j["config_hash"] = hash;
    write_text(out_path(cfg, "simulate_summary.json"), j.dump(2) + "\n");
    out << "rows " << traj.rows.size() << ", beta_hat " << fmt_g17(mr.beta_hat) << ", max r2 "
        << fmt_g17(mr.max_r2) << (traj.energy_monotone ? "" : ", ENERGY NOT MONOTONE") << "\n";
    bool ok = traj.energy_monotone || traj.nu == 0.0;
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// report aggregation
// ---------------------------------------------------------------------------

namespace {

std::optional<int> region_scale_index(const std::string& region) {
    size_t pos = region.find("C_");
    if (pos == std::string::npos) pos = region.find("B_");
    if (pos == std::string::npos) return std::nullopt;
    size_t start = pos + 2;
    size_t end = start;
    if (end < region.size() && region[end] == '-') ++end;
    while (end < region.size() && std::isdigit(static_cast<unsigned char>(region[end]))) ++end;
    if (end == start || (region[start] == '-' && end == start + 1)) return std::nullopt;
    return std::stoi(region.substr(start, end - start));
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

int cmd_report(const std::vector<std::string>& inputs, const RunConfig& cfg, std::ostream& out) {
    if (inputs.empty()) {
        out << "report: no input files\n";
        return 2;
    }
    // lemma -> max ratio; lemma -> (n -> max ratio); merged (t -> max ratio)
    std::map<std::string, double> max_ratio;
    std::map<std::string, std::map<int, double>> ratio_vs_n;
    std::map<double, double> ratio_vs_t;

    for (const auto& path : inputs) {
        auto rows = read_csv(path);
        if (rows.empty()) continue;
        const auto& head = rows.front();
        if (head.size() >= 7 && head[0] == "lemma") {
            for (size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() < 7) continue;
                const std::string& lemma = rows[r][0];
                double ratio = std::stod(rows[r][5]);
                auto it = max_ratio.find(lemma);
                if (it == max_ratio.end() || ratio > it->second) max_ratio[lemma] = ratio;
                if (auto n = region_scale_index(rows[r][2])) {
                    auto& m = ratio_vs_n[lemma];
                    auto jt = m.find(*n);
                    if (jt == m.end() || ratio > jt->second) m[*n] = ratio;
                }
            }
        } else if (head.size() == 2 && head[0] == "t" && head[1] == "ratio") {
            for (size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() < 2) continue;
                double t = std::stod(rows[r][0]), ratio = std::stod(rows[r][1]);
                auto it = ratio_vs_t.find(t);
                if (it == ratio_vs_t.end() || ratio > it->second) ratio_vs_t[t] = ratio;
            }
        } else {
            out << "report: unrecognized schema in " << path << "\n";
            return 2;
        }
    }

    std::string table;
    for (const auto& [lemma, r] : max_ratio) table += lemma + " " + fmt_g17(r) + "\n";
    write_text(out_path(cfg, "report_max_ratio.txt"), table);
    for (const auto& [lemma, m] : ratio_vs_n) {
        std::string txt;
        for (const auto& [n, r] : m) txt += std::to_string(n) + " " + fmt_g17(r) + "\n";
        write_text(out_path(cfg, "report_ratio_vs_n_" + lemma + ".txt"), txt);
    }
    if (!ratio_vs_t.empty()) {
        std::string txt;
        for (const auto& [t, r] : ratio_vs_t) txt += fmt_g17(t) + " " + fmt_g17(r) + "\n";
        write_text(out_path(cfg, "report_ratio_vs_t.txt"), txt);
    }
    out << "report: " << max_ratio.size() << " lemma groups, " << ratio_vs_t.size()
        << " time samples\n";
    return 0;
}

}  // namespace pprobe
