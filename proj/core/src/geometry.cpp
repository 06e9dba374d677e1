#include "pprobe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pprobe/rng.hpp"

namespace pprobe {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.resize(static_cast<size_t>(n));
    weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending
        weights[static_cast<size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(weights.begin(), weights.end());
}

// ---------------------------------------------------------------------------
// surfaces
// ---------------------------------------------------------------------------

Surface make_rectangle(const Vec3& corner, const Vec3& edge1, const Vec3& edge2) {
    Vec3 cr = edge1.cross(edge2);
    double area_el = cr.norm();
    if (area_el <= 0.0) throw std::invalid_argument("make_rectangle: degenerate edges");
    Vec3 n = cr / area_el;
    Surface s;
    s.kind = SurfaceKind::rectangle;
    s.name = "rect";
    s.dim_a = edge1.norm();
    s.dim_b = edge2.norm();
    s.position = [corner, edge1, edge2](double a, double b) { return corner + edge1 * a + edge2 * b; };
    s.normal = [n](double, double) { return n; };
    s.jacobian = [area_el](double, double) { return area_el; };
    return s;
}

Surface make_disc(double plane, double radius, int normal_sign) {
    if (radius <= 0.0) throw std::invalid_argument("make_disc: radius must be positive");
    Surface s;
    s.kind = SurfaceKind::disc;
    s.name = "disc";
    s.periodic_t = true;
    s.dim_a = radius;
    double sg = normal_sign >= 0 ? 1.0 : -1.0;
    s.position = [plane, radius](double a, double b) {
        double rho = radius * a, phi = kTwoPi * b;
        return Vec3{plane, rho * std::cos(phi), rho * std::sin(phi)};
    };
    s.normal = [sg](double, double) { return Vec3{sg, 0.0, 0.0}; };
    s.jacobian = [radius](double a, double) { return radius * a * radius * kTwoPi; };
    return s;
}

Surface make_annulus(double plane, double r_in, double r_out, int normal_sign) {
    if (!(0.0 <= r_in && r_in < r_out)) throw std::invalid_argument("make_annulus: need 0 <= r_in < r_out");
    Surface s;
    s.kind = SurfaceKind::annulus;
    s.name = "annulus";
    s.periodic_t = true;
    s.dim_a = r_out;
    s.dim_b = r_in;
    double sg = normal_sign >= 0 ? 1.0 : -1.0;
    double dr = r_out - r_in;
    s.position = [plane, r_in, dr](double a, double b) {
        double rho = r_in + dr * a, phi = kTwoPi * b;
        return Vec3{plane, rho * std::cos(phi), rho * std::sin(phi)};
    };
    s.normal = [sg](double, double) { return Vec3{sg, 0.0, 0.0}; };
    s.jacobian = [r_in, dr](double a, double) { return (r_in + dr * a) * dr * kTwoPi; };
    return s;
}

Surface make_cylinder(double lo, double hi, double radius, int normal_sign) {
    if (!(lo < hi) || radius <= 0.0) throw std::invalid_argument("make_cylinder: bad extents");
    Surface s;
    s.kind = SurfaceKind::cylinder_segment;
    s.name = "cyl";
    s.periodic_t = true;
    s.dim_a = hi - lo;
    s.dim_b = radius;
    double sg = normal_sign >= 0 ? 1.0 : -1.0;
    s.position = [lo, hi, radius](double a, double b) {
        double phi = kTwoPi * b;
        return Vec3{lo + (hi - lo) * a, radius * std::cos(phi), radius * std::sin(phi)};
    };
    s.normal = [sg](double, double b) {
        double phi = kTwoPi * b;
        return Vec3{0.0, sg * std::cos(phi), sg * std::sin(phi)};
    };
    s.jacobian = [lo, hi, radius](double, double) { return (hi - lo) * radius * kTwoPi; };
    return s;
}

Surface reversed(const Surface& s) {
    Surface r = s;
    auto n = s.normal;
    r.normal = [n](double a, double b) { return -n(a, b); };
    r.name = s.name + "~";
    return r;
}

Surface mirrored(const Surface& s) {
    Surface r = s;
    auto p = s.position;
    auto n = s.normal;
    r.position = [p](double a, double b) {
        Vec3 v = p(a, b);
        return Vec3{-v.x, v.y, v.z};
    };
    r.normal = [n](double a, double b) {
        Vec3 v = n(a, b);
        return Vec3{-v.x, v.y, v.z};
    };
    r.name = "-" + s.name;
    return r;
}

QuadratureRule surface_quadrature(const Surface& surf, int order) {
    if (order < 1) throw std::invalid_argument("surface_quadrature: order must be >= 1");
    std::vector<double> gs, gw;
    gauss_legendre(order, gs, gw);
    QuadratureRule q;
    q.order = order;
    if (surf.periodic_t) {
        int nt = 4 * order;
        q.s.reserve(static_cast<size_t>(order) * nt);
        for (int j = 0; j < nt; ++j) {
            double tj = (j + 0.5) / nt;
            for (int i = 0; i < order; ++i) {
                q.s.push_back(gs[static_cast<size_t>(i)]);
                q.t.push_back(tj);
                q.w.push_back(gw[static_cast<size_t>(i)] / nt);
            }
        }
    } else {
        for (int j = 0; j < order; ++j)
            for (int i = 0; i < order; ++i) {
                q.s.push_back(gs[static_cast<size_t>(i)]);
                q.t.push_back(gs[static_cast<size_t>(j)]);
                q.w.push_back(gw[static_cast<size_t>(i)] * gw[static_cast<size_t>(j)]);
            }
    }
    return q;
}

double integrate(const Surface& surf, const QuadratureRule& rule,
                 const std::function<double(const Vec3&, const Vec3&)>& fn) {
    double sum = 0.0;
    for (size_t i = 0; i < rule.size(); ++i) {
        double a = rule.s[i], b = rule.t[i];
        sum += rule.w[i] * surf.jacobian(a, b) * fn(surf.position(a, b), surf.normal(a, b));
    }
    return sum;
}

double surface_area(const Surface& surf, int order) {
    return integrate(surf, surface_quadrature(surf, order), [](const Vec3&, const Vec3&) { return 1.0; });
}

// ---------------------------------------------------------------------------
// influence function and level surfaces
// ---------------------------------------------------------------------------

double h_value(const Vec3& x) {
    double n2 = x.norm2();
    if (n2 == 0.0) throw std::invalid_argument("h_value: origin input");
    return x.x / (n2 * std::sqrt(n2));
}

Vec3 h_gradient(const Vec3& x) {
    double n2 = x.norm2();
    if (n2 == 0.0) throw std::invalid_argument("h_gradient: origin input");
    double n = std::sqrt(n2);
    double n5 = n2 * n2 * n;
    return Vec3{(n2 - 3.0 * x.x * x.x) / n5, -3.0 * x.x * x.y / n5, -3.0 * x.x * x.z / n5};
}

double level_radius(double xlev, double theta) {
    return std::sqrt(std::cos(theta) / xlev);
}

void level_point(double xlev, double theta, double& x1, double& r) {
    double rho = level_radius(xlev, theta);
    x1 = rho * std::cos(theta);
    r = rho * std::sin(theta);
}

Surface make_level_cap(double xlev, double theta_lo, double theta_hi) {
    if (xlev <= 0.0) throw std::invalid_argument("make_level_cap: level must be positive");
    if (!(0.0 <= theta_lo && theta_lo < theta_hi && theta_hi < 0.5 * kPi))
        throw std::invalid_argument("make_level_cap: need 0 <= theta_lo < theta_hi < pi/2");
    Surface s;
    s.kind = SurfaceKind::level_cap;
    s.name = "cap";
    s.periodic_t = true;
    s.dim_a = theta_lo;
    s.dim_b = theta_hi;
    double dth = theta_hi - theta_lo;
    s.position = [xlev, theta_lo, dth](double a, double b) {
        double th = theta_lo + dth * a, phi = kTwoPi * b;
        double rho = level_radius(xlev, th);
        return Vec3{rho * std::cos(th), rho * std::sin(th) * std::cos(phi), rho * std::sin(th) * std::sin(phi)};
    };
    s.normal = [xlev, theta_lo, dth](double a, double b) {
        double th = theta_lo + dth * a, phi = kTwoPi * b;
        double rho = level_radius(xlev, th);
        Vec3 p{rho * std::cos(th), rho * std::sin(th) * std::cos(phi), rho * std::sin(th) * std::sin(phi)};
        return h_gradient(p).normalized();
    };
    s.jacobian = [xlev, theta_lo, dth](double a, double) {
        double th = theta_lo + dth * a;
        double rho = level_radius(xlev, th);
        double drho = -0.5 * rho * std::tan(th);
        return rho * std::sin(th) * std::sqrt(drho * drho + rho * rho) * dth * kTwoPi;
    };
    return s;
}

// ---------------------------------------------------------------------------
// blocks
// ---------------------------------------------------------------------------

double Block::diameter() const {
    double dx = x1_hi - x1_lo;
    return std::sqrt(dx * dx + 4.0 * r_hi * r_hi);
}

Block make_cylinder_block(double x1_lo, double x1_hi, double radius, const std::string& name) {
    if (!(x1_lo < x1_hi) || radius <= 0.0) throw std::invalid_argument("make_cylinder_block: bad extents");
    Block b;
    b.kind = BlockKind::cylinder;
    b.name = name.empty() ? "cyl_block" : name;
    b.x1_lo = x1_lo;
    b.x1_hi = x1_hi;
    b.r_lo = 0.0;
    b.r_hi = radius;
    b.centroid = {0.5 * (x1_lo + x1_hi), 0.0, 0.0};
    b.boundary.push_back(make_disc(x1_lo, radius, -1));
    b.boundary.push_back(make_disc(x1_hi, radius, +1));
    b.boundary.push_back(make_cylinder(x1_lo, x1_hi, radius, +1));
    return b;
}

Block make_shell_block(double x1_lo, double x1_hi, double r_in, double r_out, const std::string& name) {
    if (!(x1_lo < x1_hi) || !(0.0 < r_in && r_in < r_out))
        throw std::invalid_argument("make_shell_block: bad extents");
    Block b;
    b.kind = BlockKind::shell;
    b.name = name.empty() ? "shell_block" : name;
    b.x1_lo = x1_lo;
    b.x1_hi = x1_hi;
    b.r_lo = r_in;
    b.r_hi = r_out;
    b.centroid = {0.5 * (x1_lo + x1_hi), 0.5 * (r_in + r_out), 0.0};
    b.boundary.push_back(make_annulus(x1_lo, r_in, r_out, -1));
    b.boundary.push_back(make_annulus(x1_hi, r_in, r_out, +1));
    b.boundary.push_back(make_cylinder(x1_lo, x1_hi, r_out, +1));
    b.boundary.push_back(make_cylinder(x1_lo, x1_hi, r_in, -1));
    return b;
}

Block dyadic_block(BlockKind kind, int n, int trunc_k) {
    double s = std::ldexp(1.0, n);
    Block b;
    if (kind == BlockKind::cylinder) {
        b = make_cylinder_block(s, 2.0 * s, 2.0 * s, "C_" + std::to_string(n));
    } else {
        double lo = -std::ldexp(1.0, n + trunc_k);
        b = make_shell_block(lo, s, s, 2.0 * s, "B_" + std::to_string(n));
    }
    b.n = n;
    return b;
}

Block mirrored(const Block& b) {
    Block r;
    r.kind = b.kind;
    r.n = b.n;
    r.name = "-" + b.name;
    r.x1_lo = -b.x1_hi;
    r.x1_hi = -b.x1_lo;
    r.r_lo = b.r_lo;
    r.r_hi = b.r_hi;
    r.centroid = {-b.centroid.x, b.centroid.y, b.centroid.z};
    for (const auto& s : b.boundary) r.boundary.push_back(mirrored(s));
    return r;
}

std::pair<double, double> h_range_on_block(const Block& b) {
    if (b.x1_lo <= 0.0 && b.x1_hi >= 0.0 && b.r_lo <= 0.0)
        throw std::invalid_argument("h_range_on_block: block closure touches the origin");
    double hmin = 1e300, hmax = -1e300;
    auto consider = [&](double x1, double r) {
        double v = h_value({x1, r, 0.0});
        hmin = std::min(hmin, v);
        hmax = std::max(hmax, v);
    };
    // h has no interior critical points; extremes lie on the boundary of the
    // (x1, r) cross-section. Along r = const the only critical x1 is +-r/sqrt(2);
    // along x1 = const h is monotone in r (or identically zero at x1 = 0).
    for (double r : {b.r_lo, b.r_hi}) {
        consider(b.x1_lo, r);
        consider(b.x1_hi, r);
        if (r > 0.0) {
            double xc = r / std::sqrt(2.0);
            if (b.x1_lo < xc && xc < b.x1_hi) consider(xc, r);
            if (b.x1_lo < -xc && -xc < b.x1_hi) consider(-xc, r);
        }
    }
    if (b.x1_lo < 0.0 && 0.0 < b.x1_hi) {
        consider(0.0, std::max(b.r_lo, 1e-300));
        consider(0.0, b.r_hi);
    }
    return {hmin, hmax};
}

std::vector<std::pair<double, double>> cap_theta_intervals(const Block& b, double xlev, double theta_max) {
    if (xlev <= 0.0) throw std::invalid_argument("cap_theta_intervals: level must be positive");
    auto inside = [&](double th) {
        double x1, r;
        level_point(xlev, th, x1, r);
        return b.contains({x1, r, 0.0});
    };
    const int kScan = 4096;
    std::vector<std::pair<double, double>> intervals;
    double prev = 0.0;
    bool prev_in = inside(prev);
    double open_at = prev_in ? 0.0 : -1.0;
    for (int i = 1; i <= kScan; ++i) {
        double th = theta_max * i / kScan;
        bool in = inside(th);
        if (in != prev_in) {
            // bisect the transition
            double a = prev, c = th;
            for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (a + c);
                if (inside(m) == prev_in)
                    a = m;
                else
                    c = m;
            }
            double cut = 0.5 * (a + c);
            if (prev_in)
                intervals.emplace_back(open_at, cut);
            else
                open_at = cut;
            prev_in = in;
        }
        prev = th;
    }
    if (prev_in) intervals.emplace_back(open_at, theta_max);
    return intervals;
}

RegionSampler sample_block(const Block& b, int count) {
    RegionSampler s;
    s.region_name = b.name;
    s.points.reserve(static_cast<size_t>(count));
    for (double x1 : {b.x1_lo, b.x1_hi})
        for (double r : {b.r_lo, b.r_hi})
            for (double phi : {0.0, kPi}) {
                if (static_cast<int>(s.points.size()) >= count) break;
                s.points.push_back({x1, r * std::cos(phi), r * std::sin(phi)});
            }
    double rl2 = b.r_lo * b.r_lo, rh2 = b.r_hi * b.r_hi;
    for (uint64_t i = 0; static_cast<int>(s.points.size()) < count; ++i) {
        double x1 = b.x1_lo + (b.x1_hi - b.x1_lo) * halton(i, 2);
        double r = std::sqrt(rl2 + (rh2 - rl2) * halton(i, 3));
        double phi = kTwoPi * halton(i, 5);
        s.points.push_back({x1, r * std::cos(phi), r * std::sin(phi)});
    }
    return s;
}

RegionSampler sample_surface(const Surface& surf, int count) {
    RegionSampler s;
    s.region_name = surf.name;
    s.points.reserve(static_cast<size_t>(count));
    for (double a : {0.0, 1.0})
        for (double bb : {0.0, 0.5}) {
            if (static_cast<int>(s.points.size()) >= count) break;
            s.points.push_back(surf.position(a, bb));
        }
    for (uint64_t i = 0; static_cast<int>(s.points.size()) < count; ++i)
        s.points.push_back(surf.position(halton(i, 2), halton(i, 3)));
    return s;
}

double volume_integrate(const Block& b, int order, const std::function<double(const Vec3&)>& fn) {
    std::vector<double> gs, gw;
    gauss_legendre(order, gs, gw);
    int nphi = 4 * order;
    double dx = b.x1_hi - b.x1_lo, dr = b.r_hi - b.r_lo;
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
        double x1 = b.x1_lo + dx * gs[static_cast<size_t>(i)];
        for (int j = 0; j < order; ++j) {
            double r = b.r_lo + dr * gs[static_cast<size_t>(j)];
            double wij = gw[static_cast<size_t>(i)] * gw[static_cast<size_t>(j)] * dx * dr * r * kTwoPi / nphi;
            for (int k = 0; k < nphi; ++k) {
                double phi = kTwoPi * (k + 0.5) / nphi;
                sum += wij * fn({x1, r * std::cos(phi), r * std::sin(phi)});
            }
        }
    }
    return sum;
}

}  // namespace pprobe
