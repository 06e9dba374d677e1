#include "pprobe/field.hpp"

#include <cmath>
#include <stdexcept>

#include "pprobe/rng.hpp"

namespace pprobe {

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

// Smooth bump profile in s = |x-c|^2/R^2: B(s) = exp(1 - 1/(1-s)) on [0,1), 0 beyond.
// All derivatives vanish at the support boundary.
double bump_b(double s) {
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
}
double bump_db(double s) {  // B'(s) = -B(s)/(1-s)^2
    if (s >= 1.0) return 0.0;
    double om = 1.0 - s;
    return -bump_b(s) / (om * om);
}
double bump_d2b(double s) {  // B''(s) = B(s) (1 - 2(1-s)) / (1-s)^4
    if (s >= 1.0) return 0.0;
    double om = 1.0 - s;
    return bump_b(s) * (1.0 - 2.0 * om) / (om * om * om * om);
}

}  // namespace

AnalyticField make_bump_field(const std::vector<BumpSpec>& bumps) {
    double radius = 0.0;
    Vec3 center{0, 0, 0};
    if (!bumps.empty()) {
        // enclosing ball of all bump supports
        center = bumps[0].center;
        for (const auto& b : bumps) radius = std::max(radius, (b.center - center).norm() + b.radius);
    }
    AnalyticField f;
    f.name = "curl_potential";
    f.support_radius = radius;
    f.support_center = center;
    f.eval = [bumps](const Vec3& x) {
        Vec3 u{0, 0, 0};
        for (const auto& b : bumps) {
            Vec3 d = x - b.center;
            double s = d.norm2() / (b.radius * b.radius);
            if (s >= 1.0) continue;
            // u = curl(B m) = grad B x m, grad B = B'(s) 2 d / R^2
            double g = b.amplitude * 2.0 * bump_db(s) / (b.radius * b.radius);
            u += (g * d).cross(b.moment);
        }
        return u;
    };
    f.grad = [bumps](const Vec3& x) {
        Mat3 G;
        for (const auto& b : bumps) {
            Vec3 d = x - b.center;
            double r2 = b.radius * b.radius;
            double s = d.norm2() / r2;
            if (s >= 1.0) continue;
            double g = b.amplitude * 2.0 * bump_db(s) / r2;
            double dg = b.amplitude * 4.0 * bump_d2b(s) / (r2 * r2);  // d g / d x_i = dg * d_i
            Vec3 dxm = d.cross(b.moment);
            for (int i = 0; i < 3; ++i) {
                // d_i u_j = dg d_i (d x m)_j + g e_i x m
                Vec3 ei{0, 0, 0};
                ei[i] = 1.0;
                Vec3 eim = ei.cross(b.moment);
                for (int j = 0; j < 3; ++j) G(i, j) += dg * d[i] * dxm[j] + g * eim[j];
            }
        }
        return G;
    };
    return f;
}

AnalyticField make_standard_field(const std::string& name,
                                  const std::map<std::string, double>& params) {
    AnalyticField f;
    f.name = name;
    if (name == "constant") {
        Vec3 c{param(params, "cx", 1.0), param(params, "cy", 2.0), param(params, "cz", 3.0)};
        f.eval = [c](const Vec3&) { return c; };
        f.grad = [](const Vec3&) { return Mat3{}; };
        return f;
    }
    if (name == "shear") {
        f.eval = [](const Vec3& x) { return Vec3{x.y, 0.0, 0.0}; };
        f.grad = [](const Vec3&) {
            Mat3 G;
            G(1, 0) = 1.0;  // d_2 u_1
            return G;
        };
        return f;
    }
    if (name == "taylor_green") {
        f.period = 6.283185307179586476925287;
        f.eval = [](const Vec3& x) {
            return Vec3{std::cos(x.x) * std::sin(x.y), -std::sin(x.x) * std::cos(x.y), 0.0};
        };
        f.grad = [](const Vec3& x) {
            Mat3 G;
            G(0, 0) = -std::sin(x.x) * std::sin(x.y);
            G(1, 0) = std::cos(x.x) * std::cos(x.y);
            G(0, 1) = -std::cos(x.x) * std::cos(x.y);
            G(1, 1) = std::sin(x.x) * std::sin(x.y);
            return G;
        };
        return f;
    }
    if (name == "abc") {
        double A = param(params, "A", 1.0), B = param(params, "B", 1.0), C = param(params, "C", 1.0);
        f.period = 6.283185307179586476925287;
        f.eval = [A, B, C](const Vec3& x) {
            return Vec3{A * std::sin(x.z) + C * std::cos(x.y),
                        B * std::sin(x.x) + A * std::cos(x.z),
                        C * std::sin(x.y) + B * std::cos(x.x)};
        };
        f.grad = [A, B, C](const Vec3& x) {
            Mat3 G;
            G(1, 0) = -C * std::sin(x.y);  // d_2 u_1
            G(2, 0) = A * std::cos(x.z);   // d_3 u_1
            G(0, 1) = B * std::cos(x.x);   // d_1 u_2
            G(2, 1) = -A * std::sin(x.z);  // d_3 u_2
            G(0, 2) = -B * std::sin(x.x);  // d_1 u_3
            G(1, 2) = C * std::cos(x.y);   // d_2 u_3
            return G;
        };
        return f;
    }
    if (name == "curl_potential") {
        BumpSpec b;
        b.center = {param(params, "cx", 0.0), param(params, "cy", 0.0), param(params, "cz", 0.0)};
        b.radius = param(params, "radius", 1.0);
        b.moment = {param(params, "mx", 0.0), param(params, "my", 0.0), param(params, "mz", 1.0)};
        b.amplitude = param(params, "amplitude", 1.0);
        return make_bump_field({b});
    }
    throw std::invalid_argument("make_standard_field: unknown field name '" + name + "'");
}

AnalyticField translated(const AnalyticField& f, const Vec3& offset) {
    AnalyticField g = f;
    auto ev = f.eval;
    auto gr = f.grad;
    g.eval = [ev, offset](const Vec3& x) { return ev(x - offset); };
    g.grad = [gr, offset](const Vec3& x) { return gr(x - offset); };
    g.support_center = f.support_center + offset;
    g.name = f.name + "+shift";
    return g;
}

AnalyticField shifted(const AnalyticField& f, const Vec3& c) {
    AnalyticField g = f;
    auto ev = f.eval;
    g.eval = [ev, c](const Vec3& x) { return ev(x) + c; };
    g.name = f.name + "+drift";
    g.support_radius = 0.0;  // no longer decays
    return g;
}

// ---------------------------------------------------------------------------
// random band-limited mode fields
// ---------------------------------------------------------------------------

ModeField random_mode_field(uint64_t seed, int k_max, double amplitude, double L) {
    ModeField mf;
    mf.box = L;
    mf.seed = seed;
    mf.k_max = k_max;
    double energy = 0.0;
    for (int kx = 0; kx <= k_max; ++kx) {
        for (int ky = (kx == 0 ? 0 : -k_max); ky <= k_max; ++ky) {
            for (int kz = ((kx == 0 && ky == 0) ? 1 : -k_max); kz <= k_max; ++kz) {
                if (kx * kx + ky * ky + kz * kz > k_max * k_max) continue;
                // per-mode stream keyed by the canonical wavevector
                uint64_t key = static_cast<uint64_t>(kx + 512) |
                               (static_cast<uint64_t>(ky + 512) << 20) |
                               (static_cast<uint64_t>(kz + 512) << 40);
                SplitMix64 rng(derive_seed(seed, key));
                ModeField::Mode m;
                m.k[0] = kx; m.k[1] = ky; m.k[2] = kz;
                for (int c = 0; c < 3; ++c)
                    m.c[c] = {rng.gaussian(), rng.gaussian()};
                // remove the component parallel to k (Leray projection per mode)
                std::complex<double> kd = m.c[0] * double(kx) + m.c[1] * double(ky) + m.c[2] * double(kz);
                double k2 = double(kx * kx + ky * ky + kz * kz);
                for (int c = 0; c < 3; ++c) m.c[c] -= kd * (double(m.k[c]) / k2);
                double e = 0.0;
                for (int c = 0; c < 3; ++c) e += std::norm(m.c[c]);
                if (e < 1e-28) continue;  // fully parallel draw, skip
                energy += 2.0 * e;        // conjugate partner included
                mf.modes.push_back(m);
            }
        }
    }
    if (energy > 0.0) {
        double scale = amplitude / std::sqrt(energy);
        for (auto& m : mf.modes)
            for (int c = 0; c < 3; ++c) m.c[c] *= scale;
    }
    return mf;
}

AnalyticField to_analytic(const ModeField& mf) {
    AnalyticField f;
    f.name = "rand(seed=" + std::to_string(mf.seed) + ",kmax=" + std::to_string(mf.k_max) + ")";
    f.period = mf.box;
    double kb = 6.283185307179586476925287 / mf.box;
    auto modes = mf.modes;  // value capture; fields outlive the ModeField
    f.eval = [modes, kb](const Vec3& x) {
        Vec3 u{0, 0, 0};
        for (const auto& m : modes) {
            double phase = kb * (m.k[0] * x.x + m.k[1] * x.y + m.k[2] * x.z);
            double cp = std::cos(phase), sp = std::sin(phase);
            // mode + conjugate partner: 2 Re(c e^{i phase})
            for (int c = 0; c < 3; ++c)
                u[c] += 2.0 * (m.c[c].real() * cp - m.c[c].imag() * sp);
        }
        return u;
    };
    f.grad = [modes, kb](const Vec3& x) {
        Mat3 G;
        for (const auto& m : modes) {
            double phase = kb * (m.k[0] * x.x + m.k[1] * x.y + m.k[2] * x.z);
            double cp = std::cos(phase), sp = std::sin(phase);
            for (int i = 0; i < 3; ++i) {
                double ki = kb * m.k[i];
                // d_i 2Re(c e^{ip}) = 2 Re(i k_i c e^{ip}) = -2 k_i (Im c cos + Re c sin)
                for (int j = 0; j < 3; ++j)
                    G(i, j) += -2.0 * ki * (m.c[j].imag() * cp + m.c[j].real() * sp);
            }
        }
        return G;
    };
    return f;
}

// ---------------------------------------------------------------------------
// norms and oscillation
// ---------------------------------------------------------------------------

double sup_norm(const AnalyticField& f, const SampleLattice& lat) {
    if (lat.n <= 0) throw std::invalid_argument("sup_norm: empty sampling lattice");
    double m = 0.0;
    Vec3 d = (lat.hi - lat.lo) / double(lat.n);
    for (int iz = 0; iz < lat.n; ++iz)
        for (int iy = 0; iy < lat.n; ++iy)
            for (int ix = 0; ix < lat.n; ++ix) {
                Vec3 x = lat.lo + Vec3{d.x * ix, d.y * iy, d.z * iz};
                m = std::max(m, f.eval(x).max_abs());
            }
    return m;
}

double grad_sup_norm(const AnalyticField& f, const SampleLattice& lat) {
    if (lat.n <= 0) throw std::invalid_argument("grad_sup_norm: empty sampling lattice");
    double m = 0.0;
    Vec3 d = (lat.hi - lat.lo) / double(lat.n);
    for (int iz = 0; iz < lat.n; ++iz)
        for (int iy = 0; iy < lat.n; ++iy)
            for (int ix = 0; ix < lat.n; ++ix) {
                Vec3 x = lat.lo + Vec3{d.x * ix, d.y * iy, d.z * iz};
                m = std::max(m, f.grad(x).max_abs());
            }
    return m;
}

double oscillation(const AnalyticField& f, const RegionSampler& sampler) {
    const auto& pts = sampler.points;
    if (pts.empty()) return 0.0;
    std::vector<Vec3> vals(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) vals[i] = f.eval(pts[i]);
    double m2 = 0.0;
    for (size_t i = 0; i + 1 < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j)
            m2 = std::max(m2, (vals[i] - vals[j]).norm2());
    return std::sqrt(m2);
}

RegionSampler sample_box(const Vec3& lo, const Vec3& hi, int count, const std::string& name) {
    RegionSampler s;
    s.region_name = name;
    s.points.reserve(static_cast<size_t>(count));
    for (int cx = 0; cx < 2 && static_cast<int>(s.points.size()) < count; ++cx)
        for (int cy = 0; cy < 2 && static_cast<int>(s.points.size()) < count; ++cy)
            for (int cz = 0; cz < 2 && static_cast<int>(s.points.size()) < count; ++cz)
                s.points.push_back({cx ? hi.x : lo.x, cy ? hi.y : lo.y, cz ? hi.z : lo.z});
    for (uint64_t i = 0; static_cast<int>(s.points.size()) < count; ++i) {
        s.points.push_back({lo.x + (hi.x - lo.x) * halton(i, 2),
                            lo.y + (hi.y - lo.y) * halton(i, 3),
                            lo.z + (hi.z - lo.z) * halton(i, 5)});
    }
    return s;
}

RegionSampler sample_rectangle(const Vec3& corner, const Vec3& e1, const Vec3& e2, int count,
                               const std::string& name) {
    RegionSampler s;
    s.region_name = name;
    s.points.reserve(static_cast<size_t>(count));
    s.points.push_back(corner);
    if (count > 1) s.points.push_back(corner + e1);
    if (count > 2) s.points.push_back(corner + e2);
    if (count > 3) s.points.push_back(corner + e1 + e2);
    for (uint64_t i = 0; static_cast<int>(s.points.size()) < count; ++i)
        s.points.push_back(corner + e1 * halton(i, 2) + e2 * halton(i, 3));
    return s;
}

}  // namespace pprobe
