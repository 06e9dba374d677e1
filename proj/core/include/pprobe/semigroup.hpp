#pragma once

#include <functional>
#include <vector>

#include "pprobe/flux.hpp"
#include "pprobe/grid.hpp"

namespace pprobe {

/// Heat semigroup e^{t Delta} as the spectral multiplier e^{-|k|^2 t}.
ScalarGrid heat_apply(const ScalarGrid& f, double t, const SpectralGrid& ws);
ScalarGrid heat_apply(const ScalarGrid& f, double t);
GridField heat_apply(const GridField& f, double t);

ScalarGrid spectral_derivative(const ScalarGrid& f, int axis, const SpectralGrid& ws);
double grad_sup_norm(const ScalarGrid& f, const SpectralGrid& ws);
ScalarGrid extract_component(const GridField& g, int comp);

/// Periodic-aliasing horizon: whole-space heat constants are recovered for
/// t <= (L_min/8)^2.
double aliasing_horizon(const ScalarGrid& f);

/// (t, ratio) series behind one semigroup bound check; `check` carries the
/// max ratio in the shared BoundCheck schema.
struct RatioSeries {
    std::vector<double> t;
    std::vector<double> ratio;
    std::vector<bool> beyond_horizon;
    BoundCheck check;
};

/// ratio(t) = |grad e^{t Delta} f|_inf sqrt(t) / |f|_inf. The sharp
/// whole-space value, attained by step profiles, is 1/sqrt(pi).
RatioSeries heat_gradient_bound_check(const ScalarGrid& f, const std::vector<double>& t_list);

inline constexpr double kSharpHeatGradientConstant = 0.56418958354775628695;  // 1/sqrt(pi)

/// Bounded time-dependent scalar source on a fixed grid shape.
struct TimeDependentScalar {
    std::function<ScalarGrid(double)> sample;
    double bound_c = 1.0;  // sup_t |q(t)|_inf <= bound_c
};

/// w(t) = int_{t0}^t e^{(t-s) Delta} q(s) ds by composite midpoint (`steps`
/// nodes). With graded=true the half of the interval adjacent to s = t is
/// subdivided geometrically (ratio 2, 8 levels) to resolve the gradient's
/// (t-s)^{-1/2} accumulation.
ScalarGrid duhamel(const TimeDependentScalar& q, double t0, double t, int steps, bool graded,
                   const SpectralGrid& ws);

/// ratio(t) = |w(.,t)|_inf / (c (t - t0)); never exceeds 1 up to roundoff.
RatioSeries duhamel_sup_bound_check(const TimeDependentScalar& q, double t0,
                                    const std::vector<double>& t_list, int steps);

/// ratio(t) = |grad w(.,t)|_inf / (c sqrt(t - t0)); the time-constant step
/// profile accumulates 2/sqrt(pi).
RatioSeries duhamel_gradient_bound_check(const TimeDependentScalar& q, double t0,
                                         const std::vector<double>& t_list, int steps);

}  // namespace pprobe
