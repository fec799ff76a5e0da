#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace qcf {

using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// 2x2 real matrix, rows (a b; c d).
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    double det() const { return a * d - b * c; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

inline Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}
inline Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

// Rotation by pi/2; plays the role of the imaginary unit for 2x2 matrices.
inline Mat2 rotation_quarter() { return {0.0, -1.0, 1.0, 0.0}; }

struct DomainDescriptor {
    enum class Kind { UnitDisk, Annulus, RightHalfPlane, UpperHalfPlane, Plane, PuncturedDisk };

    Kind kind = Kind::Plane;
    double inner_radius = 0.0;  // annulus only

    static DomainDescriptor unit_disk() { return {Kind::UnitDisk, 0.0}; }
    static DomainDescriptor annulus(double r) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus: radius must lie in (0,1)");
        return {Kind::Annulus, r};
    }
    static DomainDescriptor right_half_plane() { return {Kind::RightHalfPlane, 0.0}; }
    static DomainDescriptor upper_half_plane() { return {Kind::UpperHalfPlane, 0.0}; }
    static DomainDescriptor plane() { return {Kind::Plane, 0.0}; }
    static DomainDescriptor punctured_disk() { return {Kind::PuncturedDisk, 0.0}; }

    bool contains(Complex z) const {
        switch (kind) {
            case Kind::UnitDisk: return std::abs(z) < 1.0;
            case Kind::Annulus: return std::abs(z) > inner_radius && std::abs(z) < 1.0;
            case Kind::RightHalfPlane: return z.real() > 0.0;
            case Kind::UpperHalfPlane: return z.imag() > 0.0;
            case Kind::Plane: return true;
            case Kind::PuncturedDisk: return std::abs(z) > 0.0 && std::abs(z) < 1.0;
        }
        return false;
    }

    // Distance to the boundary (including singular points such as the puncture).
    double boundary_distance(Complex z) const {
        const double r = std::abs(z);
        switch (kind) {
            case Kind::UnitDisk: return 1.0 - r;
            case Kind::Annulus: return std::min(r - inner_radius, 1.0 - r);
            case Kind::RightHalfPlane: return z.real();
            case Kind::UpperHalfPlane: return z.imag();
            case Kind::Plane: return std::numeric_limits<double>::infinity();
            case Kind::PuncturedDisk: return std::min(r, 1.0 - r);
        }
        return 0.0;
    }
};

struct Rect {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

}  // namespace qcf
