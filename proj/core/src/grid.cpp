#include "pprobe/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "pprobe/rng.hpp"

namespace pprobe {

namespace {
// FFTW planning is not thread-safe; execution with per-instance buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

double ScalarGrid::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

double GridField::sup_norm() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

struct SpectralGrid::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

SpectralGrid::SpectralGrid(std::array<int, 3> n, std::array<double, 3> box)
    : n_(n), box_(box), impl_(new Impl) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->real = fftw_alloc_real(real_size());
    impl_->spec = fftw_alloc_complex(spec_size());
    // x is the fastest-varying index, so it is FFTW's last dimension
    impl_->fwd = fftw_plan_dft_r2c_3d(n_[2], n_[1], n_[0], impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_3d(n_[2], n_[1], n_[0], impl_->spec, impl_->real, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw std::runtime_error("SpectralGrid: FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->inv) fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
}

void SpectralGrid::forward(const double* real, std::complex<double>* spec) const {
    std::memcpy(impl_->real, real, real_size() * sizeof(double));
    fftw_execute(impl_->fwd);
    double scale = 1.0 / static_cast<double>(real_size());
    auto* s = reinterpret_cast<std::complex<double>*>(impl_->spec);
    for (size_t i = 0; i < spec_size(); ++i) spec[i] = s[i] * scale;
}

void SpectralGrid::inverse(const std::complex<double>* spec, double* real) const {
    std::memcpy(impl_->spec, spec, spec_size() * sizeof(fftw_complex));
    fftw_execute(impl_->inv);
    std::memcpy(real, impl_->real, real_size() * sizeof(double));
}

std::vector<std::complex<double>> SpectralGrid::forward_component(const GridField& g, int comp) const {
    std::vector<double> scratch(real_size());
    for (size_t i = 0; i < real_size(); ++i) scratch[i] = g.data[3 * i + comp];
    std::vector<std::complex<double>> spec(spec_size());
    forward(scratch.data(), spec.data());
    return spec;
}

void SpectralGrid::inverse_component(const std::complex<double>* spec, GridField& g, int comp) const {
    std::vector<double> scratch(real_size());
    inverse(spec, scratch.data());
    for (size_t i = 0; i < real_size(); ++i) g.data[3 * i + comp] = scratch[i];
}

std::vector<std::complex<double>> SpectralGrid::forward_scalar(const ScalarGrid& g) const {
    std::vector<std::complex<double>> spec(spec_size());
    forward(g.data.data(), spec.data());
    return spec;
}

ScalarGrid SpectralGrid::inverse_scalar(const std::vector<std::complex<double>>& spec) const {
    ScalarGrid g(n_, box_);
    inverse(spec.data(), g.data.data());
    return g;
}

double divergence_residual(const GridField& g, const SpectralGrid& ws) {
    std::vector<std::complex<double>> div(ws.spec_size(), {0.0, 0.0});
    for (int c = 0; c < 3; ++c) {
        auto spec = ws.forward_component(g, c);
        for (size_t i = 0; i < spec.size(); ++i) {
            Vec3 k = ws.wavevector(i);
            div[i] += std::complex<double>(0.0, k[c]) * spec[i];
        }
    }
    std::vector<double> d(ws.real_size());
    ws.inverse(div.data(), d.data());
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    return m;
}

GridField leray_project(const GridField& g, const SpectralGrid& ws) {
    std::vector<std::complex<double>> spec[3];
    for (int c = 0; c < 3; ++c) spec[c] = ws.forward_component(g, c);
    for (size_t i = 0; i < ws.spec_size(); ++i) {
        Vec3 k = ws.wavevector(i);
        double k2 = k.norm2();
        if (k2 == 0.0) continue;
        std::complex<double> kd = spec[0][i] * k.x + spec[1][i] * k.y + spec[2][i] * k.z;
        for (int c = 0; c < 3; ++c) spec[c][i] -= kd * (k[c] / k2);
    }
    GridField out(g.n, g.box);
    out.seed = g.seed;
    out.k_max = g.k_max;
    for (int c = 0; c < 3; ++c) ws.inverse_component(spec[c].data(), out, c);
    return out;
}

GridField leray_project(const GridField& g) {
    SpectralGrid ws(g);
    return leray_project(g, ws);
}

GridField synthesize(const ModeField& mf, int n) {
    GridField out(n, mf.box);
    SpectralGrid ws(out);
    std::vector<std::complex<double>> spec(ws.spec_size());
    int nxh = n / 2 + 1;
    auto slot = [&](int mx, int my, int mz) -> size_t {
        int iy = my >= 0 ? my : my + n;
        int iz = mz >= 0 ? mz : mz + n;
        return static_cast<size_t>(mx) + static_cast<size_t>(nxh) * (static_cast<size_t>(iy) + static_cast<size_t>(n) * iz);
    };
    for (int c = 0; c < 3; ++c) {
        std::fill(spec.begin(), spec.end(), std::complex<double>{0.0, 0.0});
        for (const auto& m : mf.modes) {
            if (m.k[0] > 0) {
                spec[slot(m.k[0], m.k[1], m.k[2])] = m.c[c];
            } else {
                // kx = 0 plane: r2c stores both partners
                spec[slot(0, m.k[1], m.k[2])] = m.c[c];
                spec[slot(0, -m.k[1], -m.k[2])] = std::conj(m.c[c]);
            }
        }
        ws.inverse_component(spec.data(), out, c);
    }
    return out;
}

GridField random_solenoidal(uint64_t seed, int k_max, double amplitude, int n, double L) {
    if (n <= 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("random_solenoidal: n must be a power of two");
    if (3 * k_max >= n)
        throw std::invalid_argument("random_solenoidal: k_max too large for grid (need k_max < n/3)");
    if (amplitude <= 0.0) throw std::invalid_argument("random_solenoidal: amplitude must be positive");
    ModeField mf = random_mode_field(seed, k_max, 1.0, L);
    GridField g = synthesize(mf, n);
    g.seed = seed;
    g.k_max = k_max;
    double s = g.sup_norm();
    if (s > 0.0) {
        double r = amplitude / s;
        for (double& v : g.data) v *= r;
    }
    return g;
}

GridField sample_field(const AnalyticField& f, int n, double L) {
    GridField g(n, L);
    double h = L / n;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Vec3 u = f.eval({h * ix, h * iy, h * iz});
                size_t i = g.index(ix, iy, iz);
                g.data[i] = u.x;
                g.data[i + 1] = u.y;
                g.data[i + 2] = u.z;
            }
    return g;
}

double grad_sup_norm(const GridField& g, const SpectralGrid& ws) {
    double m = 0.0;
    std::vector<std::complex<double>> dspec(ws.spec_size());
    std::vector<double> d(ws.real_size());
    for (int c = 0; c < 3; ++c) {
        auto spec = ws.forward_component(g, c);
        for (int axis = 0; axis < 3; ++axis) {
            for (size_t i = 0; i < spec.size(); ++i) {
                Vec3 k = ws.wavevector(i);
                dspec[i] = std::complex<double>(0.0, k[axis]) * spec[i];
            }
            ws.inverse(dspec.data(), d.data());
            for (double v : d) m = std::max(m, std::abs(v));
        }
    }
    return m;
}

double kinetic_energy(const GridField& g) {
    double s = 0.0;
    for (double v : g.data) s += v * v;
    double cell = (g.box / g.n) * (g.box / g.n) * (g.box / g.n);
    return 0.5 * s * cell;
}

// ---------------------------------------------------------------------------
// DFF1 io
// ---------------------------------------------------------------------------

namespace {
void put_u64_le(FILE* f, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    std::fwrite(b, 1, 8, f);
}
uint64_t get_u64_le(FILE* f) {
    unsigned char b[8];
    if (std::fread(b, 1, 8, f) != 8) throw std::runtime_error("DFF1: truncated header");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}
uint64_t double_bits(double d) {
    uint64_t v;
    std::memcpy(&v, &d, 8);
    return v;
}
double bits_double(uint64_t v) {
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}
}  // namespace

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_dff1(const std::string& path, const GridField& g) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("DFF1: cannot open for writing: " + path);
    std::fwrite("DFF1GRID", 1, 8, f.get());
    put_u64_le(f.get(), static_cast<uint64_t>(g.n));
    put_u64_le(f.get(), double_bits(g.box));
    for (double v : g.data) put_u64_le(f.get(), double_bits(v));
}

GridField read_dff1(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("DFF1: cannot open: " + path);
    char magic[8];
    if (std::fread(magic, 1, 8, f.get()) != 8 || std::memcmp(magic, "DFF1GRID", 8) != 0)
        throw std::runtime_error("DFF1: bad magic in " + path);
    uint64_t n = get_u64_le(f.get());
    double L = bits_double(get_u64_le(f.get()));
    if (n == 0 || n > (1ULL << 20)) throw std::runtime_error("DFF1: implausible grid size");
    GridField g(static_cast<int>(n), L);
    for (double& v : g.data) v = bits_double(get_u64_le(f.get()));
    if (std::fgetc(f.get()) != EOF) throw std::runtime_error("DFF1: trailing bytes in " + path);
    return g;
}

}  // namespace pprobe
