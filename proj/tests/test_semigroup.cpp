#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pprobe/campaign.hpp"
#include "pprobe/semigroup.hpp"

using namespace pprobe;

namespace {
const double kTwoPi = 6.28318530717958647692;

ScalarGrid cosine_mode(int n, double L, int k) {
    ScalarGrid g({n, 1, 1}, {L, L, L});
    for (int i = 0; i < n; ++i) g.data[static_cast<size_t>(i)] = std::cos(kTwoPi * k * i / n);
    return g;
}
}  // namespace

TEST_CASE("heat semigroup: identity, eigenmode decay, composition, max principle") {
    ScalarGrid c({16, 16, 16}, {kTwoPi, kTwoPi, kTwoPi});
    for (auto& v : c.data) v = 2.5;
    ScalarGrid hc = heat_apply(c, 1.7);
    for (double v : hc.data) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));

    // single mode cos(x) decays by e^{-t}
    ScalarGrid mode = cosine_mode(64, kTwoPi, 1);
    ScalarGrid ht = heat_apply(mode, 1.0);
    CHECK(ht.max_abs() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    // semigroup law
    ScalarGrid a = heat_apply(heat_apply(mode, 0.3), 0.7);
    ScalarGrid b = heat_apply(mode, 1.0);
    double diff = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
    CHECK(diff < 1e-12);

    // t = 0 is the identity
    ScalarGrid id = heat_apply(mode, 0.0);
    double diff0 = 0.0;
    for (size_t i = 0; i < id.data.size(); ++i)
        diff0 = std::max(diff0, std::abs(id.data[i] - mode.data[i]));
    CHECK(diff0 < 1e-13);

    // max principle on a random profile
    SplitMix64 rng(4);
    ScalarGrid r({32, 32, 32}, {kTwoPi, kTwoPi, kTwoPi});
    for (auto& v : r.data) v = rng.uniform(-1.0, 1.0);
    CHECK(heat_apply(r, 0.2).max_abs() <= r.max_abs() * (1.0 + 1e-12));

    CHECK_THROWS_AS(heat_apply(mode, -0.5), std::invalid_argument);
}

TEST_CASE("gradient and heat semigroup commute spectrally") {
    SplitMix64 rng(9);
    ScalarGrid f({32, 32, 32}, {kTwoPi, kTwoPi, kTwoPi});
    for (auto& v : f.data) v = rng.uniform(-1.0, 1.0);
    SpectralGrid ws(f);
    for (int axis = 0; axis < 3; ++axis) {
        ScalarGrid a = spectral_derivative(heat_apply(f, 0.1, ws), axis, ws);
        ScalarGrid b = heat_apply(spectral_derivative(f, axis, ws), 0.1, ws);
        double diff = 0.0, scale = std::max(1.0, a.max_abs());
        for (size_t i = 0; i < a.data.size(); ++i)
            diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
        CHECK(diff / scale < 1e-12);
    }
}

TEST_CASE("smoothed step attains the sharp gradient constant 1/sqrt(pi)") {
    ScalarGrid step = smoothed_step_profile(4096, 32.0, 1e-4);
    CHECK(step.max_abs() == doctest::Approx(1.0).epsilon(1e-3));
    RatioSeries s = heat_gradient_bound_check(step, {0.25, 0.5, 1.0});
    CHECK(s.check.ratio == doctest::Approx(kSharpHeatGradientConstant).epsilon(0.02));
    for (size_t i = 0; i < s.t.size(); ++i) CHECK(!s.beyond_horizon[i]);
    // beyond the aliasing horizon the flag raises
    RatioSeries far = heat_gradient_bound_check(step, {20.0});
    CHECK(far.beyond_horizon[0]);
}

TEST_CASE("random profiles stay below the sharp constant") {
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        GridField g = synthesize(random_mode_field(seed, 3, 1.0, kTwoPi), 32);
        ScalarGrid f = extract_component(g, 0);
        RatioSeries s = heat_gradient_bound_check(f, {0.05, 0.15, 0.3, 0.6});
        CHECK(s.check.ratio <= kSharpHeatGradientConstant * 1.02);
    }
    ScalarGrid c({8, 8, 8}, {kTwoPi, kTwoPi, kTwoPi});
    for (auto& v : c.data) v = 1.0;
    RatioSeries s = heat_gradient_bound_check(c, {0.1});
    CHECK(s.check.ratio == 0.0);
}

TEST_CASE("duhamel: constant source integrates exactly") {
    ScalarGrid c({16, 1, 1}, {kTwoPi, kTwoPi, kTwoPi});
    for (auto& v : c.data) v = 0.8;
    TimeDependentScalar q{[c](double) { return c; }, 0.8};
    SpectralGrid ws(c);
    ScalarGrid w = duhamel(q, 0.5, 2.0, 64, false, ws);
    for (double v : w.data) CHECK(v == doctest::Approx(0.8 * 1.5).epsilon(1e-12));

    // zero source
    ScalarGrid z({16, 1, 1}, {kTwoPi, kTwoPi, kTwoPi});
    TimeDependentScalar qz{[z](double) { return z; }, 1.0};
    CHECK(duhamel(qz, 0.0, 1.0, 32, false, ws).max_abs() == 0.0);

    CHECK_THROWS_AS(duhamel(q, 1.0, 0.5, 16, false, ws), std::invalid_argument);
}

TEST_CASE("duhamel: single-mode closed form and step-doubling convergence") {
    int n = 64;
    ScalarGrid mode = cosine_mode(n, kTwoPi, 1);
    TimeDependentScalar q{[mode](double) { return mode; }, 1.0};
    SpectralGrid ws(mode);
    double t = 1.0;
    ScalarGrid w = duhamel(q, 0.0, t, 512, false, ws);
    // w = (1 - e^{-t}) cos(x)
    double expect = 1.0 - std::exp(-1.0);
    CHECK(w.max_abs() == doctest::Approx(expect).epsilon(1e-6));

    ScalarGrid w2 = duhamel(q, 0.0, t, 1024, false, ws);
    CHECK(std::abs(w2.max_abs() - w.max_abs()) / w2.max_abs() < 1e-6);
}

TEST_CASE("duhamel sup bound (i) holds up to roundoff") {
    ScalarGrid step = smoothed_step_profile(2048, 32.0, 1e-4);
    TimeDependentScalar q{[step](double) { return step; }, step.max_abs()};
    RatioSeries s = duhamel_sup_bound_check(q, 0.0, {0.25, 1.0, 3.0}, 128);
    for (double r : s.ratio) CHECK(r <= 1.0 + 1e-6);
    CHECK(s.check.refinement_stable);
}

TEST_CASE("worst-case duhamel gradient accumulates 2/sqrt(pi)") {
    ScalarGrid step = smoothed_step_profile(4096, 32.0, 1e-4);
    TimeDependentScalar q{[step](double) { return step; }, step.max_abs()};
    RatioSeries s = duhamel_gradient_bound_check(q, 0.0, {0.25, 1.0}, 256);
    CHECK(s.check.ratio == doctest::Approx(2.0 * kSharpHeatGradientConstant).epsilon(0.05));
    CHECK(s.check.refinement_stable);
}

TEST_CASE("random bounded sources keep both duhamel bounds") {
    for (uint64_t seed : {11ULL, 12ULL}) {
        GridField g1 = synthesize(random_mode_field(seed, 3, 1.0, kTwoPi), 32);
        GridField g2 = synthesize(random_mode_field(seed + 100, 3, 1.0, kTwoPi), 32);
        ScalarGrid f = extract_component(g1, 0), h = extract_component(g2, 1);
        double c = f.max_abs() + h.max_abs();
        TimeDependentScalar q{[f, h](double t) {
                                  ScalarGrid r = f;
                                  double cs = std::cos(2 * t), sn = std::sin(2 * t);
                                  for (size_t i = 0; i < r.data.size(); ++i)
                                      r.data[i] = cs * f.data[i] + sn * h.data[i];
                                  return r;
                              },
                              c};
        RatioSeries si = duhamel_sup_bound_check(q, 0.0, {0.3}, 96);
        for (double r : si.ratio) CHECK(r <= 1.0 + 1e-6);
        RatioSeries sg = duhamel_gradient_bound_check(q, 0.0, {0.3}, 96);
        CHECK(sg.check.ratio <= 2.0 * kSharpHeatGradientConstant * 1.05);
        CHECK(sg.check.refinement_stable);
    }
}
