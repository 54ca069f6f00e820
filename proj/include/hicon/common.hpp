#ifndef HICON_COMMON_HPP
#define HICON_COMMON_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hicon {

struct SolverError : std::runtime_error {
    double residual;
    explicit SolverError(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    double operator[](int i) const { return i == 0 ? x : y; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

// Row-major 2x2 matrix.
struct Mat2 {
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    Mat2() = default;
    Mat2(double a, double b, double c, double d) : m{{a, b}, {c, d}} {}

    static Mat2 identity() { return Mat2(1.0, 0.0, 0.0, 1.0); }
    static Mat2 outer(const Vec2& a, const Vec2& b) {
        return Mat2(a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y);
    }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return Mat2(c, -s, s, c);
    }

    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }

    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m[i][j] -= o.m[i][j];
        return *this;
    }
    Mat2& operator*=(double s) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m[i][j] *= s;
        return *this;
    }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Mat2 matmul(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}
inline Mat2 transpose(const Mat2& a) { return Mat2(a(0, 0), a(1, 0), a(0, 1), a(1, 1)); }
inline double det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }
inline double ddot(const Mat2& a, const Mat2& b) {
    return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0) + a(1, 1) * b(1, 1);
}
inline double frob(const Mat2& a) { return std::sqrt(ddot(a, a)); }
inline Mat2 sym(const Mat2& a) {
    return Mat2(a(0, 0), 0.5 * (a(0, 1) + a(1, 0)), 0.5 * (a(0, 1) + a(1, 0)), a(1, 1));
}
inline Vec2 apply(const Mat2& a, const Vec2& v) {
    return Vec2(a(0, 0) * v.x + a(0, 1) * v.y, a(1, 0) * v.x + a(1, 1) * v.y);
}

} // namespace hicon

#endif
