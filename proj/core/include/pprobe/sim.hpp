#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pprobe/grid.hpp"

namespace pprobe {

struct SimConfig {
    int n = 32;
    double box = 6.283185307179586476925287;
    double nu = 1.0;  // 0 (ideal) or 1 (viscous)
    double dt = 0.0;  // 0: auto cfl * h / |u0|_inf, capped at 0.5
    double cfl = 0.25;
    double t_final = 1.0;
    int diag_every = 1;
    bool disable_nonlinearity = false;  // pure Stokes evolution (diagnostic mode)
    std::string initial = "taylor_green";  // taylor_green | abc | random | zero
    std::map<std::string, double> params;
    uint64_t seed = 1;
    int k_max = 3;
    double amplitude = 1.0;
    std::string load_dff1;  // when set, initial data comes from this file
};

struct Diagnostics {
    double t = 0.0;
    double sup_u = 0.0;
    double sup_gradu = 0.0;
    double sup_gradp = 0.0;
    double energy = 0.0;
    double r1 = 0.0;  // |grad P| / (|grad u| |u|)
    double r2 = 0.0;  // |u(t)| / |u0|
    double r3 = 0.0;  // |grad u(t)| / max_{s<=t} |u(s)|^2
    double div_residual = 0.0;
    double tail_fraction = 0.0;  // spectral energy fraction above |m| > n/4
};

struct Trajectory {
    std::vector<Diagnostics> rows;
    double u0_sup = 0.0, u0_l2 = 0.0;
    double nu = 1.0;
    bool energy_monotone = true;
    double worst_energy_jump = 0.0;  // max per-step energy increase (nu = 1)
    bool reliable = true;            // resolution sentinel (ideal runs)
    double unreliable_time = -1.0;
};

/// Pseudo-spectral periodic-box integrator: RK4 with an integrating factor
/// for the viscous term, Leray-projected and 2/3-dealiased nonlinearity.
class Simulator {
  public:
    Simulator(const GridField& u0, double nu, bool disable_nonlinearity = false);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// One step; throws on CFL violation or non-finite state.
    void step(double dt);
    double time() const { return t_; }
    double nu() const { return nu_; }
    double energy() const;
    double tail_fraction() const;
    double divergence_residual_rel() const;
    GridField velocity() const;
    Diagnostics diagnostics(double u0_sup, double running_max_sup2) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double t_ = 0.0;
    double nu_ = 1.0;
    bool stokes_only_ = false;
};

GridField make_initial_data(const SimConfig& cfg);
/// on_step, when set, fires after every accepted step (checkpointing hook).
Trajectory run(const SimConfig& cfg,
               const std::function<void(const Simulator&, int)>& on_step = {});

struct MonitorReport {
    bool vacuous = false;
    double beta_hat = 0.0;      // max r1 along the flow
    double max_r2 = 0.0;        // overall
    double max_r2_before_t0 = 0.0;
    bool r2_ok = true;          // max r2 before t0 <= 9/8 + 1e-3
    double t0_estimate = 0.0;   // last time r3 sets a new running max
    double beta2_hat = 0.0;     // r3 plateau value
    double cor13_quantity = 0.0;  // |u0|_inf |u0|_2^2
    bool reliable = true;
    double unreliable_time = -1.0;
};

MonitorReport monitor(const Trajectory& traj);

}  // namespace pprobe
