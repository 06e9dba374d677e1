#include "pprobe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pprobe/pressure.hpp"

namespace pprobe {

namespace {
using Spec = std::vector<std::complex<double>>;
}

struct Simulator::Impl {
    SpectralGrid ws;
    int n;
    double box;
    Spec state[3];
    std::vector<char> keep;  // 2/3-rule dealias mask

    explicit Impl(const GridField& u0) : ws(u0), n(u0.n), box(u0.box) {
        int cut = n / 3;
        keep.resize(ws.spec_size());
        for (size_t m = 0; m < ws.spec_size(); ++m) {
            int mm[3];
            ws.mode(m, mm);
            keep[m] = (std::abs(mm[0]) <= cut && std::abs(mm[1]) <= cut && std::abs(mm[2]) <= cut)
                          ? 1
                          : 0;
        }
        for (int c = 0; c < 3; ++c) state[c] = ws.forward_component(u0, c);
        dealias(state);
        project(state);
    }

    void dealias(Spec* s) const {
        for (int c = 0; c < 3; ++c)
            for (size_t m = 0; m < s[c].size(); ++m)
                if (!keep[m]) s[c][m] = {0.0, 0.0};
    }

    void project(Spec* s) const {
        for (size_t m = 0; m < ws.spec_size(); ++m) {
            Vec3 k = ws.wavevector(m);
            double k2 = k.norm2();
            if (k2 == 0.0) continue;
            std::complex<double> kd = s[0][m] * k.x + s[1][m] * k.y + s[2][m] * k.z;
            for (int c = 0; c < 3; ++c) s[c][m] -= kd * (k[c] / k2);
        }
    }

    /// Leray-projected, dealiased N = -(u . grad) u; also reports |u|_inf.
    void nonlinear(const Spec* s, Spec* out, double* sup_u) const {
        size_t np = ws.real_size();
        std::vector<double> u[3];
        std::vector<double> conv[3];
        Spec scratch(ws.spec_size());
        std::vector<double> deriv(np);
        for (int c = 0; c < 3; ++c) {
            u[c].resize(np);
            ws.inverse(s[c].data(), u[c].data());
            conv[c].assign(np, 0.0);
        }
        if (sup_u) {
            double m = 0.0;
            for (int c = 0; c < 3; ++c)
                for (double v : u[c]) m = std::max(m, std::abs(v));
            *sup_u = m;
        }
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                for (size_t m = 0; m < ws.spec_size(); ++m)
                    scratch[m] = std::complex<double>(0.0, ws.wavevector(m)[i]) * s[j][m];
                ws.inverse(scratch.data(), deriv.data());
                for (size_t p = 0; p < np; ++p) conv[j][p] += u[i][p] * deriv[p];
            }
        }
        for (int c = 0; c < 3; ++c) {
            out[c].resize(ws.spec_size());
            ws.forward(conv[c].data(), out[c].data());
            for (auto& v : out[c]) v = -v;
        }
        dealias(out);
        project(out);
    }
};

Simulator::Simulator(const GridField& u0, double nu, bool disable_nonlinearity)
    : impl_(new Impl(u0)), nu_(nu), stokes_only_(disable_nonlinearity) {}

Simulator::~Simulator() = default;

double Simulator::energy() const {
    const auto& ws = impl_->ws;
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (size_t m = 0; m < ws.spec_size(); ++m) s += ws.weight(m) * std::norm(impl_->state[c][m]);
    double vol = impl_->box * impl_->box * impl_->box;
    return 0.5 * vol * s;
}

double Simulator::tail_fraction() const {
    const auto& ws = impl_->ws;
    int cut = impl_->n / 4;
    double tail = 0.0, total = 0.0;
    for (int c = 0; c < 3; ++c)
        for (size_t m = 0; m < ws.spec_size(); ++m) {
            double e = ws.weight(m) * std::norm(impl_->state[c][m]);
            int mm[3];
            ws.mode(m, mm);
            total += e;
            if (std::max({std::abs(mm[0]), std::abs(mm[1]), std::abs(mm[2])}) > cut) tail += e;
        }
    return total > 0.0 ? tail / total : 0.0;
}

double Simulator::divergence_residual_rel() const {
    const auto& ws = impl_->ws;
    Spec div(ws.spec_size(), {0.0, 0.0});
    for (int c = 0; c < 3; ++c)
        for (size_t m = 0; m < ws.spec_size(); ++m)
            div[m] += std::complex<double>(0.0, ws.wavevector(m)[c]) * impl_->state[c][m];
    std::vector<double> d(ws.real_size());
    ws.inverse(div.data(), d.data());
    double dm = 0.0;
    for (double v : d) dm = std::max(dm, std::abs(v));
    GridField u = velocity();
    double s = u.sup_norm();
    return s > 0.0 ? dm / s : dm;
}

GridField Simulator::velocity() const {
    GridField g(impl_->n, impl_->box);
    for (int c = 0; c < 3; ++c) impl_->ws.inverse_component(impl_->state[c].data(), g, c);
    return g;
}

void Simulator::step(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("Simulator::step: need dt > 0");
    auto& im = *impl_;
    const auto& ws = im.ws;
    size_t ns = ws.spec_size();

    // integrating factor over half a step
    std::vector<double> ehalf(ns);
    for (size_t m = 0; m < ns; ++m) ehalf[m] = std::exp(-nu_ * ws.wavevector(m).norm2() * 0.5 * dt);

    Spec a[3], b[3], c[3], d[3], tmp[3];
    double sup_u = 0.0;
    if (im.n > 0) {
        im.nonlinear(im.state, a, &sup_u);
    }
    double h = im.box / im.n;
    if (sup_u > 0.0 && dt > 0.5 * h / sup_u)
        throw std::runtime_error("Simulator::step: CFL violation (dt > 0.5 h / |u|_inf)");
    if (stokes_only_)
        for (int k = 0; k < 3; ++k) std::fill(a[k].begin(), a[k].end(), std::complex<double>{0, 0});

    auto axpy = [&](Spec* out, const Spec* base, const Spec* rhs, double s, bool scale_base) {
        for (int k = 0; k < 3; ++k) {
            out[k].resize(ns);
            for (size_t m = 0; m < ns; ++m) {
                std::complex<double> v = base[k][m] + s * rhs[k][m];
                out[k][m] = scale_base ? ehalf[m] * v : v;
            }
        }
    };

    // u1 = E (u + dt/2 a)
    axpy(tmp, im.state, a, 0.5 * dt, true);
    im.nonlinear(tmp, b, nullptr);
    if (stokes_only_)
        for (int k = 0; k < 3; ++k) std::fill(b[k].begin(), b[k].end(), std::complex<double>{0, 0});

    // u2 = E u + dt/2 b
    for (int k = 0; k < 3; ++k) {
        tmp[k].resize(ns);
        for (size_t m = 0; m < ns; ++m) tmp[k][m] = ehalf[m] * im.state[k][m] + 0.5 * dt * b[k][m];
    }
    im.nonlinear(tmp, c, nullptr);
    if (stokes_only_)
        for (int k = 0; k < 3; ++k) std::fill(c[k].begin(), c[k].end(), std::complex<double>{0, 0});

    // u3 = E^2 u + dt E c
    for (int k = 0; k < 3; ++k) {
        tmp[k].resize(ns);
        for (size_t m = 0; m < ns; ++m)
            tmp[k][m] = ehalf[m] * (ehalf[m] * im.state[k][m] + dt * c[k][m]);
    }
    im.nonlinear(tmp, d, nullptr);
    if (stokes_only_)
        for (int k = 0; k < 3; ++k) std::fill(d[k].begin(), d[k].end(), std::complex<double>{0, 0});

    for (int k = 0; k < 3; ++k) {
        for (size_t m = 0; m < ns; ++m) {
            std::complex<double> e1 = ehalf[m];
            std::complex<double> e2 = ehalf[m] * ehalf[m];
            im.state[k][m] = e2 * im.state[k][m] +
                             (dt / 6.0) * (e2 * a[k][m] + 2.0 * e1 * (b[k][m] + c[k][m]) + d[k][m]);
        }
    }
    im.dealias(im.state);
    im.project(im.state);
    t_ += dt;

    double e = energy();
    if (!std::isfinite(e))
        throw std::runtime_error(
            "Simulator::step: non-finite state (under-resolution, not physical blow-up)");
}

Diagnostics Simulator::diagnostics(double u0_sup, double running_max_sup2) const {
    Diagnostics d;
    d.t = t_;
    GridField u = velocity();
    d.sup_u = u.sup_norm();
    d.sup_gradu = grad_sup_norm(u, impl_->ws);
    if (d.sup_u > 0.0) {
        SpectralPressure sp = grad_pressure_spectral(u, impl_->ws);
        d.sup_gradp = sp.grad_p.sup_norm();
    }
    d.energy = energy();
    d.div_residual = divergence_residual_rel();
    d.tail_fraction = tail_fraction();
    double denom1 = d.sup_gradu * d.sup_u;
    d.r1 = denom1 > 0.0 ? d.sup_gradp / denom1 : 0.0;
    d.r2 = u0_sup > 0.0 ? d.sup_u / u0_sup : 0.0;
    double m2 = std::max(running_max_sup2, d.sup_u * d.sup_u);
    d.r3 = m2 > 0.0 ? d.sup_gradu / m2 : 0.0;
    return d;
}

GridField make_initial_data(const SimConfig& cfg) {
    if (!cfg.load_dff1.empty()) return read_dff1(cfg.load_dff1);
    if (cfg.initial == "zero") return GridField(cfg.n, cfg.box);
    if (cfg.initial == "random")
        return random_solenoidal(cfg.seed, cfg.k_max, cfg.amplitude, cfg.n, cfg.box);
    AnalyticField f = make_standard_field(cfg.initial, cfg.params);
    return sample_field(f, cfg.n, cfg.box);
}

Trajectory run(const SimConfig& cfg, const std::function<void(const Simulator&, int)>& on_step) {
    GridField u0 = make_initial_data(cfg);
    Simulator sim(u0, cfg.nu, cfg.disable_nonlinearity);
    GridField u0p = sim.velocity();  // after projection + dealias

    Trajectory traj;
    traj.nu = cfg.nu;
    traj.u0_sup = u0p.sup_norm();
    traj.u0_l2 = std::sqrt(2.0 * sim.energy());

    double dt = cfg.dt;
    if (dt <= 0.0) {
        double h = cfg.box / cfg.n;
        dt = traj.u0_sup > 0.0 ? cfg.cfl * h / traj.u0_sup : 0.5;
        dt = std::min(dt, 0.5);
    }
    int nsteps = cfg.t_final > 0.0 ? static_cast<int>(std::ceil(cfg.t_final / dt - 1e-12)) : 0;
    if (nsteps > 0) dt = cfg.t_final / nsteps;

    double runmax_sup2 = traj.u0_sup * traj.u0_sup;
    traj.rows.push_back(sim.diagnostics(traj.u0_sup, runmax_sup2));
    double e_prev = sim.energy();
    double e0 = e_prev;

    for (int s = 1; s <= nsteps; ++s) {
        sim.step(dt);
        double e = sim.energy();
        if (cfg.nu > 0.0) {
            double jump = e - e_prev;
            traj.worst_energy_jump = std::max(traj.worst_energy_jump, jump);
            if (jump > 1e-10 * std::max(e0, 1.0)) traj.energy_monotone = false;
        }
        e_prev = e;
        if (cfg.nu == 0.0 && traj.reliable && sim.tail_fraction() > 1e-6) {
            traj.reliable = false;
            traj.unreliable_time = sim.time();
        }
        if (s % std::max(1, cfg.diag_every) == 0 || s == nsteps) {
            Diagnostics d = sim.diagnostics(traj.u0_sup, runmax_sup2);
            runmax_sup2 = std::max(runmax_sup2, d.sup_u * d.sup_u);
            traj.rows.push_back(d);
        }
        if (on_step) on_step(sim, s);
    }
    return traj;
}

MonitorReport monitor(const Trajectory& traj) {
    MonitorReport r;
    if (traj.rows.empty()) throw std::invalid_argument("monitor: empty trajectory");
    r.vacuous = traj.u0_sup <= 0.0;
    r.reliable = traj.reliable;
    r.unreliable_time = traj.unreliable_time;
    r.cor13_quantity = traj.u0_sup * traj.u0_l2 * traj.u0_l2;
    if (r.vacuous) return r;

    double runmax_r3 = -1.0;
    for (const auto& d : traj.rows) {
        r.beta_hat = std::max(r.beta_hat, d.r1);
        r.max_r2 = std::max(r.max_r2, d.r2);
        if (d.r3 > runmax_r3 * (1.0 + 1e-12)) {
            runmax_r3 = d.r3;
            r.t0_estimate = d.t;
        }
    }
    r.beta2_hat = runmax_r3;
    for (const auto& d : traj.rows)
        if (d.t <= r.t0_estimate) r.max_r2_before_t0 = std::max(r.max_r2_before_t0, d.r2);
    r.r2_ok = r.max_r2_before_t0 <= 9.0 / 8.0 + 1e-3;
    return r;
}

}  // namespace pprobe
