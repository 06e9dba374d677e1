#pragma once

#include <string>

#include "pprobe/field.hpp"
#include "pprobe/geometry.hpp"

namespace pprobe {

/// One bound verification record. lhs is the computed integral magnitude,
/// rhs_factor the bound's geometric factor times the oscillation power with
/// the universal constant stripped, so ratio = lhs / rhs_factor is the
/// empirical constant the check reports.
struct BoundCheck {
    std::string lemma;
    std::string field;
    std::string region;
    double lhs = 0.0;
    double rhs_factor = 0.0;
    double ratio = 0.0;
    bool refinement_stable = true;
    // diagnostics (not part of the CSV schema)
    double ratio_coarse = 0.0;
    double w = 0.0;
    int order = 0;
    bool vacuous = false;
};

std::string bound_check_csv_header();
std::string to_csv_row(const BoundCheck& c);
std::string to_json(const BoundCheck& c);

/// Ratio drift threshold for the refinement_stable flag.
inline constexpr double kStableDrift = 0.05;
/// Ratios below this are treated as vacuously stable.
inline constexpr double kVacuousRatio = 1e-12;

/// Assemble a BoundCheck from a coarse/fine lhs pair.
BoundCheck make_bound_check(const std::string& lemma, const std::string& field,
                            const std::string& region, double lhs_fine, double lhs_coarse,
                            double rhs_factor, double w, int order);

/// Quadrature of sum_{ij} u_i (d_i u_j) n_j over the surface.
double convective_flux(const AnalyticField& f, const Surface& surf, const QuadratureRule& rule);

enum class ShiftMode { none, sample_mean };

/// |flux over a rectangle| against max(l1,l2) w^2(R).
BoundCheck rectangle_bound_check(const AnalyticField& f, const Surface& rect,
                                 const RegionSampler& sampler, int order,
                                 ShiftMode shift = ShiftMode::none);

/// |flux over disc/annulus/cylinder| against r w^2, r_out w^2,
/// max(length, r) w^2 respectively.
BoundCheck surface_bound_check(const AnalyticField& f, const Surface& surf,
                               const RegionSampler& sampler, int order);

/// Charge of the block: minus the outward convective flux of (u - shift)
/// through the boundary. Mathematically shift-invariant for closed boundaries.
double block_charge(const AnalyticField& f, const Block& b, const Vec3& shift, int order);

/// |charge with centroid shift| against w^2(block) 2^n.
BoundCheck charge_bound_check(const AnalyticField& f, const Block& b, const RegionSampler& sampler,
                              int order);

/// Flux of (u . grad u) . m over the level cap {h = xlev} clipped to the
/// block, restricted to polar angles [theta_lo, theta_hi].
double level_cap_flux(const AnalyticField& f, const Block& b, double xlev, double theta_lo,
                      double theta_hi, int order);

/// |flux over the full clipped cap| against 2^n w^2(cap).
BoundCheck level_cap_flux_check(const AnalyticField& f, const Block& b, double xlev,
                                int cap_samples, int order);

}  // namespace pprobe
