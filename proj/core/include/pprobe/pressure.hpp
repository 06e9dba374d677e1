#pragma once

#include <utility>
#include <vector>

#include "pprobe/field.hpp"
#include "pprobe/flux.hpp"
#include "pprobe/geometry.hpp"
#include "pprobe/grid.hpp"

namespace pprobe {

inline constexpr double kFourPi = 12.566370614359172953850574;

/// Charge density of the pressure Poisson equation for divergence-free u:
/// q = -sum_{ij} d_i u_j d_j u_i (= -div(u . grad u), first derivatives only).
double charge_density(const AnalyticField& f, const Vec3& x);

/// Newtonian-kernel recovery of the force field from the charge density:
///   K(x) = int q(y) (x-y)/|x-y|^3 dy over r_excl < |y-x| < r_outer.
/// The kernel carries no 1/(4 pi); grad_physical() applies it.
struct CoulombResult {
    Vec3 grad_paper{0, 0, 0};
    double excl_ball_bound = 0.0;   // <= 4 pi r_excl sup|q| near x
    double outer_tail_bound = 0.0;  // 0 when the support fits inside r_outer
    bool truncated = false;
    Vec3 grad_physical() const { return grad_paper / kFourPi; }
};
CoulombResult grad_pressure_coulomb(const AnalyticField& f, const Vec3& x, double r_outer,
                                    double r_excl, int order);

/// Spectral solve of Delta P = -div(u . grad u) on the torus, zero-mean P.
struct SpectralPressure {
    GridField grad_p;     // physical normalization
    double residual_rel;  // ||Delta P + div(u.grad u)||_inf relative
};
SpectralPressure grad_pressure_spectral(const GridField& u, const SpectralGrid& ws);
SpectralPressure grad_pressure_spectral(const GridField& u);

/// Contribution of the charges in the block to the axial force component at
/// the origin (paper-kernel units): int_blk q(y) ((0-y).e1)/|y|^3 dy.
/// Summed over a tiling this reproduces the x1 component of K(0).
double block_contribution(const AnalyticField& f, const Block& b, int order);

/// |block_contribution| against 2^{-n} w^2(block).
BoundCheck dipole_bound_check(const AnalyticField& f, const Block& b, const RegionSampler& sampler,
                              int order);

/// n0 with 2^{n0-1} 3|grad u| < |u| <= 2^{n0} 3|grad u|.
int split_index_n0(double sup_u, double sup_grad_u);

/// Dyadic assembly of the axial force at the origin. The cylinder/shell
/// family over n tiles space once (shells truncated at -2^{n+trunc_k},
/// extended to cover the field support); partial sums are split at n0.
struct AxialAssembly {
    int n_min = -8, n_max = 8, n0 = 0, trunc_k = 3;
    std::vector<int> ns;
    std::vector<double> contrib_cyl, contrib_shell;  // signed, paper kernel
    double near_abs = 0.0;                           // sum_{n<n0} |.| both kinds
    double far_abs = 0.0;                            // sum_{n>=n0} |.|
    double total = 0.0;                              // signed sum, paper kernel
    double near_tail_est = 0.0, far_tail_est = 0.0;  // geometric-rate extrapolation
    double trunc_est = 0.0;                          // neglected shell tails
    double axial_physical() const { return total / kFourPi; }
};
AxialAssembly dyadic_axial_sum(const AnalyticField& f, double sup_u, double sup_grad_u, int n_min,
                               int n_max, int order, int trunc_k, int w_samples);

/// Product bound |grad P|_inf <= beta |grad u|_inf |u|_inf on one grid.
BoundCheck theorem_check_spectral(const GridField& u, const SpectralGrid& ws);
/// Same field at two resolutions; ratio_coarse holds the coarse-grid ratio.
BoundCheck theorem_check_modes(const ModeField& mf, int n_coarse, int n_fine);

}  // namespace pprobe
