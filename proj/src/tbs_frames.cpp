#include "handsem/tbs_frames.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "handsem/parallel.hpp"

namespace handsem {

namespace {

// Any unit vector orthogonal to `axis`, preferring the projection of `hint`.
Vec3d orthogonal_reference(const Vec3d& axis, const Vec3d& hint) {
  Vec3d p = hint - axis * dot(hint, axis);
  if (norm(p) < 1e-6) {
    const Vec3d fallback = std::abs(axis.x) < 0.9 ? Vec3d{1.0, 0.0, 0.0} : Vec3d{0.0, 1.0, 0.0};
    p = fallback - axis * dot(fallback, axis);
  }
  return normalized(p);
}

Mat3d orthonormal_frame(const Vec3d& twist, const Vec3d& splay) {
  const Vec3d bend = normalized(cross(splay, twist));
  return Mat3d::from_columns(twist, bend, normalized(cross(twist, bend)));
}

}  // namespace

Vec3d compute_twist_axis(const HandSkeleton& skeleton, int joint) {
  if (joint < 0 || joint >= kJoints) throw InputError("joint index out of range");
  if (is_tip(joint))
    throw InputError("joint " + skeleton.joint(joint).name + " is a fingertip and has no child");
  const auto rest = skeleton.rest_positions();
  const Vec3d bone = rest[joint + 1] - rest[joint];
  const double len = norm(bone);
  if (!(len > 0.0)) throw InputError("joint " + skeleton.joint(joint).name + " has a zero-length bone");
  return bone / len;
}

FrameCandidate candidate_at_roll(const Vec3d& twist, const Vec3d& palm_back, double roll) {
  const Vec3d u0 = orthogonal_reference(twist, palm_back);
  const Vec3d u1 = cross(twist, u0);
  FrameCandidate c;
  c.n_twist = twist;
  c.n_splay = u0 * std::cos(roll) + u1 * std::sin(roll);
  c.n_bend = cross(c.n_splay, twist);
  return c;
}

double annotation_loss(const FrameCandidate& c, const TriMesh& mesh, const Vec3d& origin) {
  const auto splay_hit = mesh.intersect(origin, c.n_splay);
  if (!splay_hit) throw RayMissError(RayAxis::splay);
  const auto bend_hit = mesh.intersect(origin, c.n_bend);
  if (!bend_hit) throw RayMissError(RayAxis::bend);
  return -dot(c.n_splay, splay_hit->normal) - dot(c.n_bend, bend_hit->normal) +
         norm(splay_hit->point - origin) / norm(bend_hit->point - origin);
}

Mat3d apply_override(const Mat3d& frame, const std::variant<double, Vec3d>& adjustment) {
  const Vec3d twist = frame.col(0);
  if (const double* roll = std::get_if<double>(&adjustment)) {
    const Mat3d r = axis_angle_matrix(twist, *roll);
    return orthonormal_frame(twist, r * frame.col(2));
  }
  const Vec3d axis = std::get<Vec3d>(adjustment);
  const double n = norm(axis);
  if (!(n > 0.0)) throw InputError("override bend axis must be nonzero");
  const double c = std::abs(dot(axis / n, twist));
  if (c >= std::cos(kPi / 180.0)) throw InputError("override bend axis is within 1 degree of the twist axis");
  const Vec3d bend = normalized(axis - twist * dot(axis, twist));
  return Mat3d::from_columns(twist, bend, normalized(cross(twist, bend)));
}

AnnotationResult annotate_frames(const HandSkeleton& skeleton, const TriMesh& mesh,
                                 const std::vector<FrameOverride>& overrides, double resolution) {
  if (!(resolution > 0.0) || resolution > 10.0 * kPi / 180.0 + 1e-15)
    throw InputError("annotation resolution must be in (0, 10] degrees");
  const auto rest = skeleton.rest_positions();
  const Vec3d& palm_back = skeleton.palm_back();
  const int steps = static_cast<int>(std::ceil(2.0 * kPi / resolution - 1e-9));

  AnnotationResult result;
  parallel_for(kActuated, [&](int a) {
    const int j = joint_of_actuated(a);
    const Vec3d twist = compute_twist_axis(skeleton, j);
    double best = std::numeric_limits<double>::infinity();
    JointAnnotation info;
    FrameCandidate chosen;
    bool splay_rejected_all = true;
    for (int i = 0; i < steps; ++i) {
      const double roll = i * resolution;
      FrameCandidate c = candidate_at_roll(twist, palm_back, roll);
      // Splay points from the pulp to the back of the finger.
      if (!(dot(c.n_splay, palm_back) > 0.0)) continue;
      splay_rejected_all = false;
      try {
        c.score = annotation_loss(c, mesh, rest[j]);
      } catch (const RayMissError&) {
        continue;
      }
      ++info.candidates_hit;
      if (c.score < best - 1e-12) {
        best = c.score;
        chosen = c;
        info.roll = roll;
        info.score = c.score;
      }
    }
    if (splay_rejected_all)
      throw NumericalError("joint " + skeleton.joint(j).name + ": bone is parallel to the palm-back direction");
    if (info.candidates_hit == 0)
      throw NumericalError("joint " + skeleton.joint(j).name + ": every candidate ray missed the mesh");
    result.frames[a] = orthonormal_frame(twist, chosen.n_splay);
    result.joints[a] = info;
  });

  for (const FrameOverride& o : overrides) {
    const int j = skeleton.find_joint(o.joint);
    if (j < 0) throw InputError("override names unknown joint '" + o.joint + "'");
    if (is_tip(j)) throw InputError("override targets fingertip '" + o.joint + "', which has no frame");
    const int a = frame_source(j);
    result.frames[a] = apply_override(result.frames[a], o.adjustment);
    result.joints[a].overridden = true;
  }
  return result;
}

}  // namespace handsem
