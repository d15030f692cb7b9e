#include "handsem/math.hpp"

#include <cmath>

#include "handsem/error.hpp"

namespace handsem {
namespace quat {

Quatd compose(const Quatd& a, const Quatd& b) { return a * b; }

Quatd inverse(const Quatd& q) {
  const double n2 = q.squared_norm();
  const Quatd c = q.conjugate();
  return {c.w / n2, c.x / n2, c.y / n2, c.z / n2};
}

Quatd normalize(const Quatd& q) {
  const double n = norm(q);
  if (!(n > 0.0) || !std::isfinite(n)) throw InputError("cannot normalize a zero or non-finite quaternion");
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Mat3d to_matrix(const Quatd& q) { return q.to_matrix(); }

// Shepperd's method: branch on the largest diagonal term for stability.
Quatd from_matrix(const Mat3d& m) {
  const double tr = m(0, 0) + m(1, 1) + m(2, 2);
  Quatd q;
  if (tr > 0.0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q = {0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s};
  } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    q = {(m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s};
  } else if (m(1, 1) > m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
    q = {(m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
    q = {(m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s};
  }
  return canonical(normalize(q));
}

Quatd from_axis_angle(const Vec3d& axis, double angle) {
  const double n = handsem::norm(axis);
  if (!(n > 0.0)) throw InputError("rotation axis must be nonzero");
  const double s = std::sin(0.5 * angle) / n;
  return {std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s};
}

Quatd slerp(const Quatd& a, const Quatd& b_in, double t) {
  Quatd b = b_in;
  double c = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  if (c < 0.0) {
    b = {-b.w, -b.x, -b.y, -b.z};
    c = -c;
  }
  double wa = 1.0 - t, wb = t;
  if (c < 1.0 - 1e-12) {
    const double theta = std::acos(std::min(c, 1.0));
    const double s = std::sin(theta);
    wa = std::sin((1.0 - t) * theta) / s;
    wb = std::sin(t * theta) / s;
  }
  return normalize({wa * a.w + wb * b.w, wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z});
}

Vec3d rotate(const Quatd& q, const Vec3d& v) { return q.to_matrix() * v; }

Quatd canonical(const Quatd& q) {
  const double comps[4] = {q.w, q.x, q.y, q.z};
  for (double c : comps) {
    if (c > 0.0) return q;
    if (c < 0.0) return {-q.w, -q.x, -q.y, -q.z};
  }
  return q;
}

bool is_unit(const Quatd& q, double tol) { return std::abs(norm(q) - 1.0) <= tol; }

double angle_between(const Quatd& a, const Quatd& b) {
  const Quatd d = inverse(a) * b;
  const double v = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  return 2.0 * std::atan2(v, std::abs(d.w));
}

}  // namespace quat

double rotation_angle_between(const Mat3d& a, const Mat3d& b) {
  const Mat3d d = a.transposed() * b;
  const double c = std::clamp(0.5 * (d(0, 0) + d(1, 1) + d(2, 2) - 1.0), -1.0, 1.0);
  // acos loses precision near 0; use the skew part there.
  const double s = 0.5 * std::sqrt((d(2, 1) - d(1, 2)) * (d(2, 1) - d(1, 2)) + (d(0, 2) - d(2, 0)) * (d(0, 2) - d(2, 0)) +
                                   (d(1, 0) - d(0, 1)) * (d(1, 0) - d(0, 1)));
  return std::atan2(s, c);
}

}  // namespace handsem
