#pragma once

// Small fixed-size vector, matrix and quaternion types.
//
// Everything is templated on the scalar so the same kinematics and loss code
// runs on plain doubles and on forward-mode Dual numbers. Binary operations
// accept mixed scalars (e.g. a constant Mat3<double> times a Vec3<Dual>).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace handsem {

template <class A, class B>
using Promote = decltype(std::declval<A>() * std::declval<B>());

template <class S>
struct Vec3 {
  S x{}, y{}, z{};

  constexpr Vec3() = default;
  constexpr Vec3(S x_, S y_, S z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}
  template <class O>
  constexpr explicit Vec3(const Vec3<O>& o) : x(o.x), y(o.y), z(o.z) {}

  S& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const S& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

using Vec3d = Vec3<double>;

template <class A, class B>
Vec3<Promote<A, B>> operator+(const Vec3<A>& a, const Vec3<B>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <class A, class B>
Vec3<Promote<A, B>> operator-(const Vec3<A>& a, const Vec3<B>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <class S>
Vec3<S> operator-(const Vec3<S>& a) {
  return {-a.x, -a.y, -a.z};
}
template <class S>
Vec3<S> operator*(const Vec3<S>& a, double s) {
  return {a.x * s, a.y * s, a.z * s};
}
template <class S>
Vec3<S> operator*(double s, const Vec3<S>& a) {
  return a * s;
}
template <class S>
Vec3<S> operator/(const Vec3<S>& a, double s) {
  return a * (1.0 / s);
}

template <class A, class B>
Promote<A, B> dot(const Vec3<A>& a, const Vec3<B>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
template <class A, class B>
Vec3<Promote<A, B>> cross(const Vec3<A>& a, const Vec3<B>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <class S>
S squared_norm(const Vec3<S>& a) {
  return dot(a, a);
}
template <class S>
S norm(const Vec3<S>& a) {
  using std::sqrt;
  return sqrt(squared_norm(a));
}
inline Vec3d normalized(const Vec3d& a) { return a / norm(a); }

// Row-major 3x3 matrix.
template <class S>
struct Mat3 {
  std::array<S, 9> m{};

  Mat3() = default;
  template <class O>
  explicit Mat3(const Mat3<O>& o) {
    for (int i = 0; i < 9; ++i) m[i] = S(o.m[i]);
  }

  S& operator()(int r, int c) { return m[3 * r + c]; }
  const S& operator()(int r, int c) const { return m[3 * r + c]; }

  static Mat3 identity() {
    Mat3 r;
    r(0, 0) = S(1.0);
    r(1, 1) = S(1.0);
    r(2, 2) = S(1.0);
    return r;
  }
  static Mat3 from_columns(const Vec3<S>& c0, const Vec3<S>& c1, const Vec3<S>& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r(i, 0) = c0[i];
      r(i, 1) = c1[i];
      r(i, 2) = c2[i];
    }
    return r;
  }
  Vec3<S> col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  friend bool operator==(const Mat3&, const Mat3&) = default;
};

using Mat3d = Mat3<double>;

template <class A, class B>
Mat3<Promote<A, B>> operator*(const Mat3<A>& a, const Mat3<B>& b) {
  Mat3<Promote<A, B>> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}
template <class A, class B>
Vec3<Promote<A, B>> operator*(const Mat3<A>& a, const Vec3<B>& v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z, a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}
// a^T v without forming the transpose.
template <class A, class B>
Vec3<Promote<A, B>> transpose_mul(const Mat3<A>& a, const Vec3<B>& v) {
  return {a(0, 0) * v.x + a(1, 0) * v.y + a(2, 0) * v.z, a(0, 1) * v.x + a(1, 1) * v.y + a(2, 1) * v.z,
          a(0, 2) * v.x + a(1, 2) * v.y + a(2, 2) * v.z};
}

inline double determinant(const Mat3d& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Max-abs deviation of M^T M from identity.
inline double orthonormality_error(const Mat3d& a) {
  const Mat3d g = a.transposed() * a;
  double err = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return err;
}

inline bool is_rotation(const Mat3d& a, double tol = 1e-9) {
  return orthonormality_error(a) <= tol && std::abs(determinant(a) - 1.0) <= tol;
}

// Unit quaternion (w, x, y, z) acting as q v q^-1.
template <class S>
struct Quat {
  S w{1.0}, x{}, y{}, z{};

  constexpr Quat() = default;
  constexpr Quat(S w_, S x_, S y_, S z_) : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}
  template <class O>
  constexpr explicit Quat(const Quat<O>& o) : w(o.w), x(o.x), y(o.y), z(o.z) {}

  static Quat identity() { return Quat(S(1.0), S(0.0), S(0.0), S(0.0)); }

  Quat conjugate() const { return {w, -x, -y, -z}; }
  S squared_norm() const { return w * w + x * x + y * y + z * z; }

  // Rotation matrix; assumes unit norm.
  Mat3<S> to_matrix() const {
    const S xx = x * x, yy = y * y, zz = z * z;
    const S xy = x * y, xz = x * z, yz = y * z;
    const S wx = w * x, wy = w * y, wz = w * z;
    Mat3<S> r;
    r(0, 0) = 1.0 - 2.0 * (yy + zz);
    r(0, 1) = 2.0 * (xy - wz);
    r(0, 2) = 2.0 * (xz + wy);
    r(1, 0) = 2.0 * (xy + wz);
    r(1, 1) = 1.0 - 2.0 * (xx + zz);
    r(1, 2) = 2.0 * (yz - wx);
    r(2, 0) = 2.0 * (xz - wy);
    r(2, 1) = 2.0 * (yz + wx);
    r(2, 2) = 1.0 - 2.0 * (xx + yy);
    return r;
  }

  friend bool operator==(const Quat&, const Quat&) = default;
};

using Quatd = Quat<double>;

template <class A, class B>
Quat<Promote<A, B>> operator*(const Quat<A>& a, const Quat<B>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <class S>
Quat<S> normalized_generic(const Quat<S>& q) {
  using std::sqrt;
  const S inv = 1.0 / sqrt(q.squared_norm());
  return {q.w * inv, q.x * inv, q.y * inv, q.z * inv};
}

// Double-only rotation helpers.
namespace quat {

inline double norm(const Quatd& q) { return std::sqrt(q.squared_norm()); }
Quatd compose(const Quatd& a, const Quatd& b);
Quatd inverse(const Quatd& q);
// Throws InputError on a zero (or non-finite) quaternion.
Quatd normalize(const Quatd& q);
Mat3d to_matrix(const Quatd& q);
Quatd from_matrix(const Mat3d& m);
Quatd from_axis_angle(const Vec3d& axis, double angle);
Quatd slerp(const Quatd& a, const Quatd& b, double t);
Vec3d rotate(const Quatd& q, const Vec3d& v);
// Sign representative with w >= 0 (ties broken on the first nonzero component).
Quatd canonical(const Quatd& q);
bool is_unit(const Quatd& q, double tol = 1e-9);
// Rotation angle of a^-1 b in [0, pi].
double angle_between(const Quatd& a, const Quatd& b);

}  // namespace quat

inline Mat3d axis_angle_matrix(const Vec3d& axis, double angle) {
  return quat::to_matrix(quat::from_axis_angle(axis, angle));
}

// Rotation angle of a^T b in [0, pi].
double rotation_angle_between(const Mat3d& a, const Mat3d& b);

inline constexpr double kPi = std::numbers::pi;

// Wraps to (-pi, pi]; generic so derivatives pass through unchanged.
template <class S>
S wrap_angle(S a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace handsem
