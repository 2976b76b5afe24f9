#pragma once

#include <cmath>
#include <array>
#include <algorithm>

namespace convexgeo {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product; positive when b is ccw of a
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline Vec2 normalized(const Vec2& v) { return v / norm(v); }
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }
inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) { return a + (b - a) * t; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

// signed volume of the tetrahedron (a,b,c,d) times 6
inline double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return dot(cross(b - a, c - a), d - a);
}

// any two unit vectors completing v to an orthonormal right-handed frame
inline void orthonormal_basis(const Vec3& v, Vec3& b1, Vec3& b2) {
    Vec3 n = normalized(v);
    Vec3 a = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    b1 = normalized(cross(n, a));
    b2 = cross(n, b1);
}

// rigid motion of the plane, p -> R*p + t with R a rotation
struct Rigid2 {
    double c = 1.0, s = 0.0;  // cos, sin
    Vec2 t;

    Vec2 operator()(const Vec2& p) const {
        return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y};
    }
    // maps segment (a0,a1) onto segment (b0,b1); caller guarantees equal lengths
    static Rigid2 map_segment(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
        Vec2 u = normalized(a1 - a0), v = normalized(b1 - b0);
        Rigid2 m;
        m.c = dot(u, v);
        m.s = cross(u, v);
        m.t = b0 - Vec2{m.c * a0.x - m.s * a0.y, m.s * a0.x + m.c * a0.y};
        return m;
    }
    // this-after-other: (a.compose(b))(p) == a(b(p))
    Rigid2 compose(const Rigid2& o) const {
        Rigid2 m;
        m.c = c * o.c - s * o.s;
        m.s = s * o.c + c * o.s;
        m.t = (*this)(o.t);
        return m;
    }
};

inline double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

// squared distance from p to segment [a,b]
inline double point_segment_dist2(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double t = norm2(ab) > 0 ? clamp01(dot(p - a, ab) / norm2(ab)) : 0.0;
    Vec2 q = a + ab * t;
    return norm2(p - q);
}

inline double point_segment_dist2(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double t = norm2(ab) > 0 ? clamp01(dot(p - a, ab) / norm2(ab)) : 0.0;
    Vec3 q = a + ab * t;
    return norm2(p - q);
}

}  // namespace convexgeo
