#include "pprobe/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "pprobe/format.hpp"

namespace pprobe {

std::string bound_check_csv_header() { return "lemma,field,region,lhs,rhs_factor,ratio,stable"; }

std::string to_csv_row(const BoundCheck& c) {
    return c.lemma + "," + c.field + "," + c.region + "," + fmt_g17(c.lhs) + "," +
           fmt_g17(c.rhs_factor) + "," + fmt_g17(c.ratio) + "," + (c.refinement_stable ? "1" : "0");
}

std::string to_json(const BoundCheck& c) {
    nlohmann::json j;
    j["lemma"] = c.lemma;
    j["field"] = c.field;
    j["region"] = c.region;
    j["lhs"] = c.lhs;
    j["rhs_factor"] = c.rhs_factor;
    j["ratio"] = c.ratio;
    j["stable"] = c.refinement_stable;
    j["ratio_coarse"] = c.ratio_coarse;
    j["w"] = c.w;
    j["order"] = c.order;
    j["vacuous"] = c.vacuous;
    return j.dump();
}

BoundCheck make_bound_check(const std::string& lemma, const std::string& field,
                            const std::string& region, double lhs_fine, double lhs_coarse,
                            double rhs_factor, double w, int order) {
    BoundCheck c;
    c.lemma = lemma;
    c.field = field;
    c.region = region;
    c.lhs = std::abs(lhs_fine);
    c.rhs_factor = rhs_factor;
    c.w = w;
    c.order = order;
    double rc = rhs_factor > 0.0 ? std::abs(lhs_coarse) / rhs_factor : 0.0;
    c.ratio = rhs_factor > 0.0 ? c.lhs / rhs_factor : 0.0;
    c.ratio_coarse = rc;
    double big = std::max(c.ratio, rc);
    c.vacuous = big < kVacuousRatio;
    c.refinement_stable = c.vacuous || std::abs(c.ratio - rc) <= kStableDrift * big;
    return c;
}

double convective_flux(const AnalyticField& f, const Surface& surf, const QuadratureRule& rule) {
    double sum = 0.0;
    for (size_t i = 0; i < rule.size(); ++i) {
        double a = rule.s[i], b = rule.t[i];
        Vec3 x = surf.position(a, b);
        Vec3 u = f.eval(x);
        Vec3 conv = f.grad(x).left_apply(u);  // (u . grad) u
        sum += rule.w[i] * surf.jacobian(a, b) * conv.dot(surf.normal(a, b));
    }
    return sum;
}

namespace {

double shifted_flux(const AnalyticField& f, const Surface& surf, const QuadratureRule& rule,
                    const Vec3& shift) {
    double sum = 0.0;
    for (size_t i = 0; i < rule.size(); ++i) {
        double a = rule.s[i], b = rule.t[i];
        Vec3 x = surf.position(a, b);
        Vec3 u = f.eval(x) - shift;
        Vec3 conv = f.grad(x).left_apply(u);  // ((u-c) . grad) u == ((u-c) . grad)(u-c)
        sum += rule.w[i] * surf.jacobian(a, b) * conv.dot(surf.normal(a, b));
    }
    return sum;
}

Vec3 sample_mean_velocity(const AnalyticField& f, const RegionSampler& sampler) {
    Vec3 m{0, 0, 0};
    if (sampler.points.empty()) return m;
    for (const auto& p : sampler.points) m += f.eval(p);
    return m / static_cast<double>(sampler.points.size());
}

}  // namespace

BoundCheck rectangle_bound_check(const AnalyticField& f, const Surface& rect,
                                 const RegionSampler& sampler, int order, ShiftMode shift) {
    if (rect.kind != SurfaceKind::rectangle)
        throw std::invalid_argument("rectangle_bound_check: surface is not a rectangle");
    if (rect.dim_a <= 0.0 || rect.dim_b <= 0.0)
        throw std::invalid_argument("rectangle_bound_check: degenerate rectangle");
    Vec3 c = shift == ShiftMode::sample_mean ? sample_mean_velocity(f, sampler) : Vec3{0, 0, 0};
    double lhs_c = shifted_flux(f, rect, surface_quadrature(rect, order), c);
    double lhs_f = shifted_flux(f, rect, surface_quadrature(rect, 2 * order), c);
    double w = oscillation(f, sampler);
    double rhs = std::max(rect.dim_a, rect.dim_b) * w * w;
    return make_bound_check("2.1", f.name, sampler.region_name, lhs_f, lhs_c, rhs, w, order);
}

BoundCheck surface_bound_check(const AnalyticField& f, const Surface& surf,
                               const RegionSampler& sampler, int order) {
    double geom = 0.0;
    switch (surf.kind) {
        case SurfaceKind::disc:
            geom = surf.dim_a;
            break;
        case SurfaceKind::annulus:
            geom = surf.dim_a;  // outer radius
            break;
        case SurfaceKind::cylinder_segment:
            geom = std::max(surf.dim_a, surf.dim_b);  // max(length, radius)
            break;
        default:
            throw std::invalid_argument("surface_bound_check: kind must be disc/annulus/cylinder");
    }
    double lhs_c = convective_flux(f, surf, surface_quadrature(surf, order));
    double lhs_f = convective_flux(f, surf, surface_quadrature(surf, 2 * order));
    double w = oscillation(f, sampler);
    return make_bound_check("2.2", f.name, sampler.region_name, lhs_f, lhs_c, geom * w * w, w, order);
}

double block_charge(const AnalyticField& f, const Block& b, const Vec3& shift, int order) {
    double flux = 0.0;
    for (const auto& s : b.boundary) flux += shifted_flux(f, s, surface_quadrature(s, order), shift);
    return -flux;
}

BoundCheck charge_bound_check(const AnalyticField& f, const Block& b, const RegionSampler& sampler,
                              int order) {
    Vec3 shift = f.eval(b.centroid);
    double lhs_c = block_charge(f, b, shift, order);
    double lhs_f = block_charge(f, b, shift, 2 * order);
    double w = oscillation(f, sampler);
    double rhs = w * w * b.scale();
    return make_bound_check("2.3", f.name, b.name, lhs_f, lhs_c, rhs, w, order);
}

double level_cap_flux(const AnalyticField& f, const Block& b, double xlev, double theta_lo,
                      double theta_hi, int order) {
    auto intervals = cap_theta_intervals(b, xlev);
    double sum = 0.0;
    for (auto [a, c] : intervals) {
        double lo = std::max(a, theta_lo), hi = std::min(c, theta_hi);
        if (hi - lo < 1e-12) continue;
        Surface cap = make_level_cap(xlev, lo, hi);
        sum += convective_flux(f, cap, surface_quadrature(cap, order));
    }
    return sum;
}

BoundCheck level_cap_flux_check(const AnalyticField& f, const Block& b, double xlev,
                                int cap_samples, int order) {
    auto intervals = cap_theta_intervals(b, xlev);
    if (intervals.empty())
        throw std::invalid_argument("level_cap_flux_check: level surface misses the block");
    double lhs_c = 0.0, lhs_f = 0.0;
    RegionSampler sampler;
    sampler.region_name = b.name + "@h=" + fmt_g17(xlev);
    int per = std::max(8, cap_samples / static_cast<int>(intervals.size()));
    for (auto [a, c] : intervals) {
        Surface cap = make_level_cap(xlev, a, c);
        lhs_c += convective_flux(f, cap, surface_quadrature(cap, order));
        lhs_f += convective_flux(f, cap, surface_quadrature(cap, 2 * order));
        auto part = sample_surface(cap, per);
        sampler.points.insert(sampler.points.end(), part.points.begin(), part.points.end());
    }
    double w = oscillation(f, sampler);
    double rhs = b.scale() * w * w;
    return make_bound_check("2.4", f.name, sampler.region_name, lhs_f, lhs_c, rhs, w, order);
}

}  // namespace pprobe
