#include "pprobe/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pprobe {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

double charge_density(const AnalyticField& f, const Vec3& x) {
    return -f.grad(x).contract_transposed();
}

CoulombResult grad_pressure_coulomb(const AnalyticField& f, const Vec3& x, double r_outer,
                                    double r_excl, int order) {
    if (r_excl <= 0.0 || r_outer <= r_excl)
        throw std::invalid_argument("grad_pressure_coulomb: need 0 < r_excl < r_outer");
    if (order < 1) throw std::invalid_argument("grad_pressure_coulomb: order must be >= 1");
    CoulombResult res;
    if (f.compactly_supported()) {
        double reach = (f.support_center - x).norm() + f.support_radius;
        res.truncated = r_outer < reach;
    } else {
        res.truncated = true;  // non-decaying field cut at r_outer
    }

    // K(x) = -int_r int_{S^2} q(x + rho w) w dOmega drho: the kernel cancels
    // the volume element exactly in spherical coordinates about x.
    std::vector<double> gs, gw;
    gauss_legendre(8, gs, gw);
    int n_mu = 2 * order, n_phi = 4 * order, panels = order;
    std::vector<double> ms, mw;
    gauss_legendre(n_mu, ms, mw);
    double panel_w = (r_outer - r_excl) / panels;
    Vec3 acc{0, 0, 0};
    for (int p = 0; p < panels; ++p) {
        double lo = r_excl + panel_w * p;
        for (int g = 0; g < 8; ++g) {
            double rho = lo + panel_w * gs[static_cast<size_t>(g)];
            double wr = panel_w * gw[static_cast<size_t>(g)];
            for (int im = 0; im < n_mu; ++im) {
                double mu = 2.0 * ms[static_cast<size_t>(im)] - 1.0;  // cos(theta) in [-1,1]
                double wmu = 2.0 * mw[static_cast<size_t>(im)];
                double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
                for (int ip = 0; ip < n_phi; ++ip) {
                    double phi = kTwoPi * (ip + 0.5) / n_phi;
                    Vec3 w{mu, st * std::cos(phi), st * std::sin(phi)};
                    double q = charge_density(f, x + rho * w);
                    acc -= (wr * wmu * kTwoPi / n_phi * q) * w;
                }
            }
        }
    }
    res.grad_paper = acc;

    // exclusion-ball error estimate: |int_{|y-x|<r_excl}| <= 4 pi r_excl sup|q|
    double q_sup = 0.0;
    for (int i = 0; i < 64; ++i) {
        double rho = r_excl * (i + 0.5) / 64.0;
        q_sup = std::max(q_sup, std::abs(charge_density(f, x + Vec3{rho, 0, 0})));
        q_sup = std::max(q_sup, std::abs(charge_density(f, x + Vec3{0, rho, 0})));
        q_sup = std::max(q_sup, std::abs(charge_density(f, x + Vec3{0, 0, rho})));
    }
    res.excl_ball_bound = kFourPi * r_excl * q_sup;
    res.outer_tail_bound = res.truncated ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    return res;
}

SpectralPressure grad_pressure_spectral(const GridField& u, const SpectralGrid& ws) {
    double sup = u.sup_norm();
    double div_res = divergence_residual(u, ws);
    if (sup > 0.0 && div_res > 1e-6 * sup)
        throw std::invalid_argument("grad_pressure_spectral: input is not solenoidal");

    size_t np = ws.real_size();
    std::vector<std::complex<double>> uhat[3];
    for (int c = 0; c < 3; ++c) uhat[c] = ws.forward_component(u, c);

    // N_j = sum_i u_i d_i u_j in physical space
    std::vector<double> nl[3];
    std::vector<std::complex<double>> scratch(ws.spec_size());
    std::vector<double> deriv(np);
    for (int j = 0; j < 3; ++j) {
        nl[j].assign(np, 0.0);
        for (int i = 0; i < 3; ++i) {
            for (size_t m = 0; m < ws.spec_size(); ++m) {
                Vec3 k = ws.wavevector(m);
                scratch[m] = std::complex<double>(0.0, k[i]) * uhat[j][m];
            }
            ws.inverse(scratch.data(), deriv.data());
            for (size_t p = 0; p < np; ++p) nl[j][p] += u.data[3 * p + i] * deriv[p];
        }
    }

    std::vector<std::complex<double>> nhat[3];
    for (int j = 0; j < 3; ++j) {
        nhat[j].resize(ws.spec_size());
        ws.forward(nl[j].data(), nhat[j].data());
    }

    // Delta P = -div N  =>  P_k = i k . N_k / |k|^2, zero-mean
    std::vector<std::complex<double>> phat(ws.spec_size(), {0.0, 0.0});
    for (size_t m = 0; m < ws.spec_size(); ++m) {
        Vec3 k = ws.wavevector(m);
        double k2 = k.norm2();
        if (k2 == 0.0) continue;
        std::complex<double> kdotn = nhat[0][m] * k.x + nhat[1][m] * k.y + nhat[2][m] * k.z;
        phat[m] = std::complex<double>(0.0, 1.0) * kdotn / k2;
    }

    SpectralPressure out;
    out.grad_p = GridField(u.n, u.box);
    for (int j = 0; j < 3; ++j) {
        for (size_t m = 0; m < ws.spec_size(); ++m) {
            Vec3 k = ws.wavevector(m);
            scratch[m] = std::complex<double>(0.0, k[j]) * phat[m];
        }
        ws.inverse_component(scratch.data(), out.grad_p, j);
    }

    // residual Delta P + div N, measured against |div N|_inf
    std::vector<std::complex<double>> rhat(ws.spec_size());
    std::vector<std::complex<double>> divn(ws.spec_size());
    for (size_t m = 0; m < ws.spec_size(); ++m) {
        Vec3 k = ws.wavevector(m);
        std::complex<double> kdotn = nhat[0][m] * k.x + nhat[1][m] * k.y + nhat[2][m] * k.z;
        divn[m] = std::complex<double>(0.0, 1.0) * kdotn;
        rhat[m] = -k.norm2() * phat[m] + divn[m];
    }
    std::vector<double> r(np), dn(np);
    ws.inverse(rhat.data(), r.data());
    ws.inverse(divn.data(), dn.data());
    double rmax = 0.0, dmax = 0.0;
    for (size_t p = 0; p < np; ++p) {
        rmax = std::max(rmax, std::abs(r[p]));
        dmax = std::max(dmax, std::abs(dn[p]));
    }
    out.residual_rel = dmax > 0.0 ? rmax / dmax : rmax;
    return out;
}

SpectralPressure grad_pressure_spectral(const GridField& u) {
    SpectralGrid ws(u);
    return grad_pressure_spectral(u, ws);
}

double block_contribution(const AnalyticField& f, const Block& b, int order) {
    if (b.contains({0, 0, 0}) ||
        (b.x1_lo <= 0.0 && 0.0 <= b.x1_hi && b.r_lo <= 0.0 && 0.0 <= b.r_hi))
        throw std::invalid_argument("block_contribution: block touches the origin");
    return volume_integrate(b, order, [&f](const Vec3& y) {
        return charge_density(f, y) * (-h_value(y));
    });
}

BoundCheck dipole_bound_check(const AnalyticField& f, const Block& b, const RegionSampler& sampler,
                              int order) {
    double lhs_c = block_contribution(f, b, order);
    double lhs_f = block_contribution(f, b, 2 * order);
    double w = oscillation(f, sampler);
    double rhs = w * w / b.scale();
    return make_bound_check("2.5", f.name, b.name, lhs_f, lhs_c, rhs, w, order);
}

int split_index_n0(double sup_u, double sup_grad_u) {
    if (sup_u <= 0.0 || sup_grad_u <= 0.0)
        throw std::invalid_argument("split_index_n0: norms must be positive");
    double x = sup_u / (3.0 * sup_grad_u);
    int n0 = static_cast<int>(std::ceil(std::log2(x)));
    // guard rounding at exact powers of two
    while (std::ldexp(1.0, n0 - 1) * 3.0 * sup_grad_u >= sup_u) --n0;
    while (std::ldexp(1.0, n0) * 3.0 * sup_grad_u < sup_u) ++n0;
    return n0;
}

AxialAssembly dyadic_axial_sum(const AnalyticField& f, double sup_u, double sup_grad_u, int n_min,
                               int n_max, int order, int trunc_k, int w_samples) {
    AxialAssembly a;
    a.n_min = n_min;
    a.n_max = n_max;
    a.trunc_k = trunc_k;
    // extend shell truncation to cover the field support so the family tiles
    // everything the charges occupy
    double reach = f.compactly_supported()
                       ? f.support_center.norm() + f.support_radius
                       : 0.0;
    for (int n = n_min; n <= n_max; ++n) {
        Block c = dyadic_block(BlockKind::cylinder, n, trunc_k);
        Block s = dyadic_block(BlockKind::shell, n, trunc_k);
        if (reach > 0.0 && -s.x1_lo < reach) {
            s = make_shell_block(-1.25 * reach, s.x1_hi, s.r_lo, s.r_hi, s.name);
            s.n = n;
        }
        a.ns.push_back(n);
        a.contrib_cyl.push_back(block_contribution(f, c, order));
        a.contrib_shell.push_back(block_contribution(f, s, order));
        // neglected shell tail: charge-rate bound times the influence value
        // at the truncation face
        double w_shell = oscillation(f, sample_block(s, w_samples));
        double h_face = std::abs(h_value({s.x1_lo, s.r_lo, 0.0}));
        a.trunc_est += w_shell * w_shell * s.scale() * h_face;
    }
    a.n0 = split_index_n0(sup_u, sup_grad_u);
    for (size_t i = 0; i < a.ns.size(); ++i) {
        double mag = std::abs(a.contrib_cyl[i]) + std::abs(a.contrib_shell[i]);
        (a.ns[i] < a.n0 ? a.near_abs : a.far_abs) += mag;
        a.total += a.contrib_cyl[i] + a.contrib_shell[i];
    }
    if (!a.ns.empty()) {
        a.near_tail_est = std::abs(a.contrib_cyl.front()) + std::abs(a.contrib_shell.front());
        a.far_tail_est = std::abs(a.contrib_cyl.back()) + std::abs(a.contrib_shell.back());
    }
    return a;
}

BoundCheck theorem_check_spectral(const GridField& u, const SpectralGrid& ws) {
    SpectralPressure sp = grad_pressure_spectral(u, ws);
    double lhs = sp.grad_p.sup_norm();
    double rhs = grad_sup_norm(u, ws) * u.sup_norm();
    return make_bound_check("thm1.1", "grid(n=" + std::to_string(u.n) + ")", "torus", lhs, lhs, rhs,
                            0.0, u.n);
}

BoundCheck theorem_check_modes(const ModeField& mf, int n_coarse, int n_fine) {
    GridField uc = synthesize(mf, n_coarse);
    GridField uf = synthesize(mf, n_fine);
    SpectralGrid wc(uc), wf(uf);
    BoundCheck cc = theorem_check_spectral(uc, wc);
    BoundCheck cf = theorem_check_spectral(uf, wf);
    BoundCheck out = cf;
    out.field = "rand(seed=" + std::to_string(mf.seed) + ",kmax=" + std::to_string(mf.k_max) + ")";
    out.region = "torus(n=" + std::to_string(n_coarse) + "->" + std::to_string(n_fine) + ")";
    out.ratio_coarse = cc.ratio;
    double big = std::max(out.ratio, out.ratio_coarse);
    out.vacuous = big < kVacuousRatio;
    out.refinement_stable = out.vacuous || std::abs(out.ratio - out.ratio_coarse) <= kStableDrift * big;
    return out;
}

}  // namespace pprobe
