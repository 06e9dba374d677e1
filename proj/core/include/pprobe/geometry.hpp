#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pprobe/field.hpp"
#include "pprobe/vec3.hpp"

namespace pprobe {

enum class SurfaceKind { rectangle, disc, annulus, cylinder_segment, level_cap };

/// Oriented parameterized patch over (s,t) in [0,1]^2 with unit normal and
/// area element. Revolution surfaces mark the t-direction periodic so the
/// quadrature picks uniform azimuthal nodes.
struct Surface {
    SurfaceKind kind = SurfaceKind::rectangle;
    std::string name;
    std::function<Vec3(double, double)> position;
    std::function<Vec3(double, double)> normal;
    std::function<double(double, double)> jacobian;
    bool periodic_t = false;
    // descriptive dimensions feeding the bound factors
    double dim_a = 0.0;  // rectangle l1; disc r; annulus r2; cylinder length; cap theta_lo
    double dim_b = 0.0;  // rectangle l2; annulus r1; cylinder r; cap theta_hi
};

Surface make_rectangle(const Vec3& corner, const Vec3& edge1, const Vec3& edge2);
/// Disc { x1 = plane, x2^2+x3^2 < r^2 }, normal = normal_sign * e1.
Surface make_disc(double plane, double radius, int normal_sign);
/// Annulus { x1 = plane, r_in < sqrt(x2^2+x3^2) < r_out }.
Surface make_annulus(double plane, double r_in, double r_out, int normal_sign);
/// Lateral cylinder { lo < x1 < hi, x2^2+x3^2 = r^2 }; +1 points away from the axis.
Surface make_cylinder(double lo, double hi, double radius, int normal_sign);
Surface reversed(const Surface& s);
/// Reflect through the plane x1 = 0 (outward normals map to outward normals).
Surface mirrored(const Surface& s);

/// Tensor-product rule on the parameter square; weights are positive and sum
/// to one. Gauss-Legendre along s; along t Gauss-Legendre as well, except for
/// periodic surfaces where 4*order uniform midpoints are used.
struct QuadratureRule {
    std::vector<double> s, t, w;
    int order = 0;
    size_t size() const { return w.size(); }
};

QuadratureRule surface_quadrature(const Surface& surf, int order);

/// Integral over the surface of fn(position, oriented normal).
double integrate(const Surface& surf, const QuadratureRule& rule,
                 const std::function<double(const Vec3&, const Vec3&)>& fn);
double surface_area(const Surface& surf, int order);

/// Gauss-Legendre nodes/weights on [0,1]; weights sum to 1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// ---------------------------------------------------------------------------
// influence function h(x) = x1 / |x|^3
// ---------------------------------------------------------------------------

double h_value(const Vec3& x);
Vec3 h_gradient(const Vec3& x);

/// Radius of the level surface {h = xlev} at polar angle theta from +e1:
/// rho(theta) = sqrt(cos(theta)/xlev).
double level_radius(double xlev, double theta);
/// (x1, r) of the level-surface point at polar angle theta.
void level_point(double xlev, double theta, double& x1, double& r);

/// Surface of revolution {h = xlev} for theta in [theta_lo, theta_hi],
/// oriented toward increasing h. Requires xlev > 0, 0 <= theta_lo < theta_hi.
Surface make_level_cap(double xlev, double theta_lo, double theta_hi);

inline constexpr double kLevelCapThetaMax = 1.5533430342749532;  // 89 degrees

// ---------------------------------------------------------------------------
// blocks
// ---------------------------------------------------------------------------

enum class BlockKind { cylinder, shell };

/// A solid of revolution about the x1-axis with its outward-oriented boundary
/// and cylindrical extents for volume quadrature.
struct Block {
    BlockKind kind = BlockKind::cylinder;
    int n = 0;  // dyadic index when dyadic
    std::string name;
    std::vector<Surface> boundary;
    double x1_lo = 0.0, x1_hi = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    Vec3 centroid{0, 0, 0};

    bool contains(const Vec3& p) const {
        double r2 = p.y * p.y + p.z * p.z;
        return p.x > x1_lo && p.x < x1_hi && r2 >= r_lo * r_lo && r2 < r_hi * r_hi;
    }
    double scale() const { return std::ldexp(1.0, n); }
    double diameter() const;
};

Block make_cylinder_block(double x1_lo, double x1_hi, double radius, const std::string& name = "");
Block make_shell_block(double x1_lo, double x1_hi, double r_in, double r_out,
                       const std::string& name = "");
/// Dyadic cylinder {2^n < x1 < 2^{n+1}, r < 2^{n+1}} or dyadic shell
/// {x1 < 2^n, 2^n < r < 2^{n+1}} truncated at x1 = -2^{n+trunc_k}.
Block dyadic_block(BlockKind kind, int n, int trunc_k = 3);
/// Reflection through the plane x1 = 0.
Block mirrored(const Block& b);

/// (inf, sup) of h over the closure of the block.
std::pair<double, double> h_range_on_block(const Block& b);

/// Theta intervals for which the level surface {h = xlev} lies inside the
/// block (clamped to [0, theta_max]); at most two disjoint intervals.
std::vector<std::pair<double, double>> cap_theta_intervals(const Block& b, double xlev,
                                                           double theta_max = kLevelCapThetaMax);

/// Corner-seeded Halton sampler over the block volume (cylindrical map).
RegionSampler sample_block(const Block& b, int count);
/// Sampler on a surface patch via its parameterization.
RegionSampler sample_surface(const Surface& s, int count);

/// Volume integral over the block in cylindrical coordinates:
/// Gauss x1 (order) x Gauss r (order, weight r) x uniform theta (4*order).
double volume_integrate(const Block& b, int order, const std::function<double(const Vec3&)>& fn);

}  // namespace pprobe
