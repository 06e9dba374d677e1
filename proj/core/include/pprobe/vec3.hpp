#pragma once

#include <array>
#include <cmath>

namespace pprobe {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const { return *this / norm(); }
    // componentwise max magnitude
    double max_abs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 3x3 matrix; used for velocity gradients with m(i,j) = d_i u_j.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }

    double trace() const { return a[0] + a[4] + a[8]; }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
    // contraction sum_ij m(i,j) m(j,i) = tr(M M)
    double contract_transposed() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += (*this)(i, j) * (*this)(j, i);
        return s;
    }
    // (v^T M)_j = sum_i v_i m(i,j); with m(i,j) = d_i u_j this is (v . grad) u
    Vec3 left_apply(const Vec3& v) const {
        Vec3 r;
        for (int j = 0; j < 3; ++j)
            r[j] = v.x * (*this)(0, j) + v.y * (*this)(1, j) + v.z * (*this)(2, j);
        return r;
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] * s;
        return r;
    }
};

}  // namespace pprobe
