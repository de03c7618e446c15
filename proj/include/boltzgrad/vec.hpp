#pragma once

#include <array>
#include <cmath>

namespace boltzgrad {

/// Small fixed-capacity vector used for positions, velocities and normals.
/// Only the first `dim` components are meaningful; the rest stay zero, which
/// lets most geometry routines ignore the dimension entirely.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec() = default;
  constexpr Vec(double x, double y, double z = 0.0) : c{x, y, z} {}

  constexpr double& operator[](int k) { return c[k]; }
  constexpr double operator[](int k) const { return c[k]; }

  constexpr Vec& operator+=(const Vec& o) {
    for (int k = 0; k < 3; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    for (int k = 0; k < 3; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
  friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
  friend constexpr Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
  friend constexpr Vec operator-(const Vec& a) { return Vec{-a.c[0], -a.c[1], -a.c[2]}; }
  friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

constexpr double dot(const Vec& a, const Vec& b) {
  return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}
constexpr double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

}  // namespace boltzgrad
