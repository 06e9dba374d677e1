#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pprobe/field.hpp"
#include "pprobe/vec3.hpp"

namespace pprobe {

/// Scalar values on a periodic grid, x-fastest ordering. Dimensions need not
/// be equal (1d profiles use (n,1,1)).
struct ScalarGrid {
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> box{1.0, 1.0, 1.0};
    std::vector<double> data;

    ScalarGrid() = default;
    ScalarGrid(std::array<int, 3> dims, std::array<double, 3> L)
        : n(dims), box(L), data(static_cast<size_t>(dims[0]) * dims[1] * dims[2], 0.0) {}

    size_t size() const { return data.size(); }
    size_t index(int ix, int iy, int iz) const {
        return static_cast<size_t>(ix) + static_cast<size_t>(n[0]) * (static_cast<size_t>(iy) + static_cast<size_t>(n[1]) * iz);
    }
    double& at(int ix, int iy, int iz) { return data[index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return data[index(ix, iy, iz)]; }
    double max_abs() const;
};

/// Velocity samples on a periodic n^3 grid, component-interleaved
/// (u1 u2 u3 per point), x-fastest.
struct GridField {
    int n = 0;
    double box = 1.0;
    std::vector<double> data;  // 3 n^3
    uint64_t seed = 0;
    int k_max = 0;

    GridField() = default;
    GridField(int n_, double L) : n(n_), box(L), data(3ULL * n_ * n_ * n_, 0.0) {}

    size_t points() const { return static_cast<size_t>(n) * n * n; }
    size_t index(int ix, int iy, int iz) const {
        return 3 * (static_cast<size_t>(ix) + static_cast<size_t>(n) * (static_cast<size_t>(iy) + static_cast<size_t>(n) * iz));
    }
    double& at(int ix, int iy, int iz, int c) { return data[index(ix, iy, iz) + c]; }
    double at(int ix, int iy, int iz, int c) const { return data[index(ix, iy, iz) + c]; }
    Vec3 velocity(int ix, int iy, int iz) const {
        size_t i = index(ix, iy, iz);
        return {data[i], data[i + 1], data[i + 2]};
    }
    Vec3 position(int ix, int iy, int iz) const {
        double h = box / n;
        return {h * ix, h * iy, h * iz};
    }
    /// componentwise sup norm
    double sup_norm() const;
};

/// FFTW-backed real-to-complex spectral transforms on one grid shape.
/// forward() produces true Fourier coefficients c_k (u = sum c_k e^{ikx});
/// inverse() synthesizes from them. Instances are not thread-safe; create
/// one per thread.
class SpectralGrid {
  public:
    SpectralGrid(std::array<int, 3> n, std::array<double, 3> box);
    explicit SpectralGrid(const GridField& g) : SpectralGrid({g.n, g.n, g.n}, {g.box, g.box, g.box}) {}
    explicit SpectralGrid(const ScalarGrid& g) : SpectralGrid(g.n, g.box) {}
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    const std::array<int, 3>& dims() const { return n_; }
    const std::array<double, 3>& box() const { return box_; }
    size_t real_size() const { return static_cast<size_t>(n_[0]) * n_[1] * n_[2]; }
    size_t spec_size() const { return static_cast<size_t>(n_[0] / 2 + 1) * n_[1] * n_[2]; }

    void forward(const double* real, std::complex<double>* spec) const;
    void inverse(const std::complex<double>* spec, double* real) const;

    std::vector<std::complex<double>> forward_component(const GridField& g, int comp) const;
    void inverse_component(const std::complex<double>* spec, GridField& g, int comp) const;
    std::vector<std::complex<double>> forward_scalar(const ScalarGrid& g) const;
    ScalarGrid inverse_scalar(const std::vector<std::complex<double>>& spec) const;

    /// Integer wavevector of spectral index; physical k = 2*pi*m/L per axis.
    void mode(size_t idx, int m[3]) const {
        int nxh = n_[0] / 2 + 1;
        int ix = static_cast<int>(idx % nxh);
        int iy = static_cast<int>((idx / nxh) % n_[1]);
        int iz = static_cast<int>(idx / (static_cast<size_t>(nxh) * n_[1]));
        m[0] = ix;
        m[1] = iy <= n_[1] / 2 ? iy : iy - n_[1];
        m[2] = iz <= n_[2] / 2 ? iz : iz - n_[2];
    }
    Vec3 wavevector(size_t idx) const {
        int m[3];
        mode(idx, m);
        constexpr double two_pi = 6.283185307179586476925287;
        return {two_pi * m[0] / box_[0], two_pi * m[1] / box_[1], two_pi * m[2] / box_[2]};
    }
    /// Parseval weight (conjugate-partner multiplicity of the r2c layout).
    double weight(size_t idx) const {
        int nxh = n_[0] / 2 + 1;
        int ix = static_cast<int>(idx % nxh);
        return (ix == 0 || 2 * ix == n_[0]) ? 1.0 : 2.0;
    }

  private:
    std::array<int, 3> n_;
    std::array<double, 3> box_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Spectral divergence residual max_x |div u| (absolute).
double divergence_residual(const GridField& g, const SpectralGrid& ws);

/// Orthogonal projection onto divergence-free fields (k=0 mode untouched).
GridField leray_project(const GridField& g, const SpectralGrid& ws);
GridField leray_project(const GridField& g);

/// Band-limited random solenoidal field; deterministic in (seed, k_max) and
/// grid-rescaled so the sampled sup norm equals amplitude exactly.
/// Requires n a power of two and k_max < n/3.
GridField random_solenoidal(uint64_t seed, int k_max, double amplitude, int n, double L);

/// Exact synthesis of a mode field on an n^3 grid (no projection needed).
GridField synthesize(const ModeField& mf, int n);

/// Sample an analytic field on the grid.
GridField sample_field(const AnalyticField& f, int n, double L);

/// max_{i,j} sup |d_i u_j| via spectral differentiation.
double grad_sup_norm(const GridField& g, const SpectralGrid& ws);

/// Kinetic energy (1/2) integral |u|^2 dx (physical-space sum).
double kinetic_energy(const GridField& g);

// DFF1 container: magic "DFF1GRID", little-endian u64 n, binary64 L, then
// 3 n^3 binary64 values, component-interleaved, x-fastest.
void write_dff1(const std::string& path, const GridField& g);
GridField read_dff1(const std::string& path);

}  // namespace pprobe
