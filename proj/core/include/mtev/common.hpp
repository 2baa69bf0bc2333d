#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace mtev {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

inline CVec3 operator*(Complex s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline CVec3 operator*(Complex s, const CVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline CVec3& operator+=(CVec3& a, const CVec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}

/// Bilinear (unconjugated) product, the pairing used in reciprocity relations.
inline Complex dot(const CVec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Complex dot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const CVec3& a) {
  return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

/// i^n for integer n (exact, no pow round-off).
inline Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace mtev
