#pragma once

// Rotation representations and distances: 3x3 rotation matrices, the
// continuous six-number representation (first two matrix columns) and the
// geodesic angle used by all pose metrics.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skperlin {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }

    constexpr double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const noexcept {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const noexcept { return std::sqrt(dot(*this)); }
};

// Row-major 3x3 matrix. Only the handful of operations the library needs.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static constexpr Mat3 identity() noexcept { return Mat3{}; }

    constexpr double operator()(int r, int c) const noexcept { return m[3 * r + c]; }
    constexpr double& operator()(int r, int c) noexcept { return m[3 * r + c]; }

    constexpr Mat3 operator*(const Mat3& o) const noexcept {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out(r, c) = (*this)(r, 0) * o(0, c) + (*this)(r, 1) * o(1, c) + (*this)(r, 2) * o(2, c);
        return out;
    }

    constexpr Vec3 operator*(const Vec3& v) const noexcept {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    constexpr Mat3 transposed() const noexcept {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
        return out;
    }

    constexpr double trace() const noexcept { return m[0] + m[4] + m[8]; }

    constexpr Vec3 column(int c) const noexcept { return {m[c], m[3 + c], m[6 + c]}; }
};

// Six reals: the two leading columns of a rotation matrix, concatenated.
using R6d = std::array<double, 6>;

inline bool all_finite(const Mat3& r) noexcept {
    for (double v : r.m)
        if (!std::isfinite(v)) return false;
    return true;
}

// Orthonormality and det(R)=+1 within tol, elementwise.
inline bool is_rotation(const Mat3& r, double tol = 1e-6) noexcept {
    if (!all_finite(r)) return false;
    const Mat3 g = r.transposed() * r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(g(i, j) - want) > tol) return false;
        }
    const double det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
                       r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
                       r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
    return std::abs(det - 1.0) <= tol;
}

inline R6d rotmat_to_r6d(const Mat3& r) {
    if (!all_finite(r)) throw std::invalid_argument("rotmat_to_r6d: non-finite matrix entry");
    return {r(0, 0), r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1)};
}

// Gram-Schmidt reconstruction. b1 = normalize(a1), b2 = normalize(a2 - (b1.a2) b1),
// b3 = b1 x b2; columns (b1, b2, b3).
inline Mat3 r6d_to_rotmat(const R6d& v) {
    for (double e : v)
        if (!std::isfinite(e)) throw std::invalid_argument("r6d_to_rotmat: non-finite entry");
    const Vec3 a1{v[0], v[1], v[2]};
    const Vec3 a2{v[3], v[4], v[5]};
    const double n1 = a1.norm();
    if (n1 <= 1e-8) throw std::invalid_argument("r6d_to_rotmat: first vector has near-zero norm");
    const Vec3 b1 = a1 * (1.0 / n1);
    const Vec3 p = a2 - b1 * b1.dot(a2);
    const double n2 = p.norm();
    if (n2 <= 1e-8) throw std::invalid_argument("r6d_to_rotmat: vectors are parallel");
    const Vec3 b2 = p * (1.0 / n2);
    const Vec3 b3 = b1.cross(b2);
    Mat3 out;
    out(0, 0) = b1.x; out(1, 0) = b1.y; out(2, 0) = b1.z;
    out(0, 1) = b2.x; out(1, 1) = b2.y; out(2, 1) = b2.z;
    out(0, 2) = b3.x; out(1, 2) = b3.y; out(2, 2) = b3.z;
    return out;
}

// Geodesic distance on SO(3) in degrees, range [0, 180]. The arccos argument
// is clamped to [-1, 1] so near-identity pairs cannot produce NaN; bitwise
// equal inputs short-circuit to exactly zero.
inline double geodesic_angle_deg(const Mat3& a, const Mat3& b) {
    if (!all_finite(a) || !all_finite(b))
        throw std::invalid_argument("geodesic_angle_deg: non-finite matrix entry");
    if (a.m == b.m) return 0.0;
    const double t = (a.transposed() * b).trace();
    double c = (t - 1.0) * 0.5;
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c) * (180.0 / 3.14159265358979323846);
}

inline Mat3 axis_angle(Vec3 axis, double radians) {
    const double n = axis.norm();
    if (n <= 1e-12) throw std::invalid_argument("axis_angle: zero axis");
    axis = axis * (1.0 / n);
    const double c = std::cos(radians), s = std::sin(radians), k = 1.0 - c;
    Mat3 r;
    r(0, 0) = c + axis.x * axis.x * k;
    r(0, 1) = axis.x * axis.y * k - axis.z * s;
    r(0, 2) = axis.x * axis.z * k + axis.y * s;
    r(1, 0) = axis.y * axis.x * k + axis.z * s;
    r(1, 1) = c + axis.y * axis.y * k;
    r(1, 2) = axis.y * axis.z * k - axis.x * s;
    r(2, 0) = axis.z * axis.x * k - axis.y * s;
    r(2, 1) = axis.z * axis.y * k + axis.x * s;
    r(2, 2) = c + axis.z * axis.z * k;
    return r;
}

inline constexpr R6d t_pose_r6d() noexcept { return {1, 0, 0, 0, 1, 0}; }

}  // namespace skperlin
