#pragma once

// Random inputs and brute-force reference implementations shared by the
// unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "handsem/hand_model.hpp"
#include "handsem/mesh.hpp"
#include "handsem/objectives.hpp"
#include "handsem/semantics.hpp"
#include "handsem/synthetic.hpp"

namespace handsem::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Uniformly distributed rotation (Shoemake).
inline Quatd random_rotation(Rng& rng) {
  const double u1 = uniform(rng, 0.0, 1.0), u2 = uniform(rng, 0.0, 2.0 * kPi), u3 = uniform(rng, 0.0, 2.0 * kPi);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  return {a * std::sin(u2), a * std::cos(u2), b * std::sin(u3), b * std::cos(u3)};
}

inline Vec3d random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3d v{n(rng), n(rng), n(rng)};
  return normalized(v);
}

// TBS-local motion with twist, bend and splay drawn from the given ranges.
struct AngleRanges {
  double twist = 0.2;
  double bend_lo = 0.05, bend_hi = 1.3;
  double splay = 0.15;
};

inline MotionSequence random_motion(Rng& rng, int frames, const AngleRanges& r = {}) {
  std::vector<Quatd> q;
  for (int i = 0; i < frames * kActuated; ++i)
    q.push_back(compose_tbs_euler(
        {uniform(rng, -r.twist, r.twist), uniform(rng, r.bend_lo, r.bend_hi), uniform(rng, -r.splay, r.splay)}));
  return MotionSequence(frames, std::move(q), Convention::tbs_local);
}

inline HandSkeleton random_skeleton(Rng& rng) {
  HandSpec spec = HandSpec::defaults().scaled(uniform(rng, 0.8, 1.2)).with_finger_length_scale(uniform(rng, 0.7, 1.3));
  spec.seed = rng();
  return make_synthetic_hand(spec).skeleton;
}

inline PoseFK fk_of(const MotionSequence& q_tbs, const HandSkeleton& skel) {
  return forward_kinematics(tbs_to_global(q_tbs, skel), skel);
}

// Brute-force metric references: one cosine at a time, straight from the
// definition, with explicit sums over joints, rows and frames.
inline double naive_cosine(const Vec3d& a, const Vec3d& b) {
  const double d = a.x * b.x + a.y * b.y + a.z * b.z;
  const double na = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  return d / (na * nb);
}

inline double naive_s_palm(const SemanticMatrix& a, const SemanticMatrix& b) {
  double total = 0.0;
  for (int t = 0; t < a.frames(); ++t) {
    double frame = 0.0;
    for (int j = 0; j < kJoints; ++j)
      for (int n = 0; n < kPalmAnchors; ++n) frame += naive_cosine(a.row(j, t, kJoints + n), b.row(j, t, kJoints + n));
    total += frame / (kJoints * kPalmAnchors);
  }
  return total / a.frames();
}

inline double naive_s_finger(const SemanticMatrix& a, const SemanticMatrix& b) {
  double total = 0.0;
  for (int t = 0; t < a.frames(); ++t) {
    double frame = 0.0;
    for (int j = 0; j < kJoints; ++j)
      for (int k = 0; k < kJoints; ++k) frame += j == k ? 1.0 : naive_cosine(a.row(j, t, k), b.row(j, t, k));
    total += frame / (kJoints * kJoints);
  }
  return total / a.frames();
}

inline double naive_positional_mse(const PoseFK& a, const PoseFK& b) {
  double total = 0.0;
  for (int t = 0; t < a.frames; ++t)
    for (int j = 0; j < kJoints; ++j) {
      const Vec3d d = a.position(t, j) - b.position(t, j);
      total += d.x * d.x + d.y * d.y + d.z * d.z;
    }
  return total / (a.frames * kJoints);
}

inline double mean_joint_error(const PoseFK& a, const PoseFK& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) total += norm(a.positions[i] - b.positions[i]);
  return total / static_cast<double>(a.positions.size());
}

// Elliptic cylinder along +x with semi-axes `minor` and `major`; the minor
// axis is the palm-back direction rolled by `phi` about x.
inline TriMesh elliptic_cylinder(double minor, double major, double phi, int segments = 1440) {
  const Vec3d e_min{0.0, -std::sin(phi), std::cos(phi)};
  const Vec3d e_maj = cross(e_min, Vec3d{1.0, 0.0, 0.0});
  std::vector<Vec3d> v, n;
  std::vector<TriMesh::Triangle> tris;
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * kPi * i / segments;
    const Vec3d radial = e_min * (minor * std::cos(a)) + e_maj * (major * std::sin(a));
    const Vec3d normal = normalized(e_min * (std::cos(a) / minor) + e_maj * (std::sin(a) / major));
    for (double x : {-0.05, 0.05}) {
      v.push_back(radial + Vec3d{x, 0.0, 0.0});
      n.push_back(normal);
    }
  }
  for (int i = 0; i < segments; ++i) {
    const int a = 2 * i, b = 2 * ((i + 1) % segments);
    tris.push_back({a, b, a + 1});
    tris.push_back({a + 1, b, b + 1});
  }
  return TriMesh(v, tris, n);
}

// Closed-form annotation loss on the elliptic cross-section for a splay
// direction at angle psi from the minor axis.
inline double ellipse_loss(double psi, double minor, double major) {
  auto radius = [&](double a) {
    return 1.0 / std::sqrt(std::cos(a) * std::cos(a) / (minor * minor) + std::sin(a) * std::sin(a) / (major * major));
  };
  auto alignment = [&](double a) {
    const double c = std::cos(a), s = std::sin(a);
    return (c * c / (minor * minor) + s * s / (major * major)) /
           std::sqrt(c * c / std::pow(minor, 4) + s * s / std::pow(major, 4));
  };
  return -alignment(psi) - alignment(psi + kPi / 2.0) + radius(psi) / radius(psi + kPi / 2.0);
}

}  // namespace handsem::testing
