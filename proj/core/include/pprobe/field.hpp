#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pprobe/vec3.hpp"

namespace pprobe {

/// A divergence-free velocity field with closed-form point evaluation and
/// exact gradient. grad(x)(i,j) = d_i u_j.
struct AnalyticField {
    std::function<Vec3(const Vec3&)> eval;
    std::function<Mat3(const Vec3&)> grad;
    std::string name;
    // > 0: u vanishes for |x - support_center| >= support_radius
    double support_radius = 0.0;
    Vec3 support_center{0.0, 0.0, 0.0};
    // > 0: field is periodic with this box length (sampling-domain hint)
    double period = 0.0;

    bool compactly_supported() const { return support_radius > 0.0; }
};

/// Regular sampling lattice for sup-norm estimation of analytic fields.
/// Points x = lo + (hi-lo) * i/n per axis, i in [0, n); doubling n refines
/// the lattice in a nested way, so sampled sup norms never decrease.
struct SampleLattice {
    Vec3 lo{0, 0, 0};
    Vec3 hi{1, 1, 1};
    int n = 32;
};

/// Deterministic point cloud covering a region; used for oscillation
/// estimates. Points come from a corner-seeded Halton fill so sampled
/// oscillations are reproducible lower bounds.
struct RegionSampler {
    std::vector<Vec3> points;
    std::string region_name;
};

/// Named closed-form fields. Recognized names:
///   constant      params cx, cy, cz
///   shear         u = (x2, 0, 0)
///   taylor_green  u = (cos x sin y, -sin x cos y, 0)
///   abc           params A, B, C
///   curl_potential  compactly supported bump, params cx, cy, cz, radius,
///                   mx, my, mz, amplitude
/// Throws std::invalid_argument on unknown names.
AnalyticField make_standard_field(const std::string& name,
                                  const std::map<std::string, double>& params = {});

/// One smooth compactly supported curl-potential bump.
struct BumpSpec {
    Vec3 center{0, 0, 0};
    double radius = 1.0;
    Vec3 moment{0, 0, 1};
    double amplitude = 1.0;
};
AnalyticField make_bump_field(const std::vector<BumpSpec>& bumps);

/// Translate a field: result(x) = f(x - offset).
AnalyticField translated(const AnalyticField& f, const Vec3& offset);
/// Add a constant drift (stays divergence-free).
AnalyticField shifted(const AnalyticField& f, const Vec3& c);

/// Band-limited random trigonometric field on a period-L box, divergence-free
/// by construction. Coefficients depend only on (seed, wavevector), so the
/// same seed describes the same continuous field at every grid resolution.
struct ModeField {
    struct Mode {
        int k[3];                               // integer wavevector (canonical rep)
        std::complex<double> c[3];              // projected complex amplitude
    };
    std::vector<Mode> modes;
    double box = 6.283185307179586476925287;    // period L
    uint64_t seed = 0;
    int k_max = 0;
};

/// Unit-spectral-energy random mode set, Leray-projected per mode.
ModeField random_mode_field(uint64_t seed, int k_max, double amplitude, double L);
AnalyticField to_analytic(const ModeField& mf);

/// Componentwise sup norm max_i sup |u_i| over the lattice.
double sup_norm(const AnalyticField& f, const SampleLattice& lat);
/// max_{i,j} sup |d_i u_j| over the lattice.
double grad_sup_norm(const AnalyticField& f, const SampleLattice& lat);

/// Sampled oscillation: max pairwise |u(p) - u(p')| over the sampler points.
/// A lower bound for the true oscillation over the region.
double oscillation(const AnalyticField& f, const RegionSampler& sampler);

/// Samplers for simple regions (corner points first, Halton fill after).
RegionSampler sample_box(const Vec3& lo, const Vec3& hi, int count,
                         const std::string& name = "box");
RegionSampler sample_rectangle(const Vec3& corner, const Vec3& e1, const Vec3& e2,
                               int count, const std::string& name = "rect");

inline constexpr int kDefaultSamplerCount = 4096;

}  // namespace pprobe
