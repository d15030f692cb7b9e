#pragma once

// Twist-bend-splay frame annotation from a skeleton and a hand mesh.
//
// For each actuated joint the twist axis follows the bone distally. Bend and
// splay candidates are swept around the twist axis; each candidate is scored
// by casting rays from the joint along +splay and +bend and comparing the hit
// normals and hit distances (fingers are thinner dorsal-palmar than
// side-to-side). The best candidate per joint becomes the rest frame with
// columns (twist, bend, splay).

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "handsem/error.hpp"
#include "handsem/hand_model.hpp"
#include "handsem/mesh.hpp"

namespace handsem {

struct FrameCandidate {
  Vec3d n_twist, n_bend, n_splay;
  double score = 0.0;

  Mat3d matrix() const { return Mat3d::from_columns(n_twist, n_bend, n_splay); }
};

// Manual adjustment applied after the automatic search: either roll the
// bend/splay pair about the twist axis, or pin the bend axis explicitly.
struct FrameOverride {
  std::string joint;
  std::variant<double, Vec3d> adjustment;  // roll in radians, or bend axis
};

enum class RayAxis { splay, bend };

class RayMissError : public NumericalError {
 public:
  explicit RayMissError(RayAxis axis)
      : NumericalError(std::string("ray along +") + (axis == RayAxis::splay ? "splay" : "bend") +
                       " missed the mesh"),
        axis_(axis) {}
  RayAxis axis() const { return axis_; }

 private:
  RayAxis axis_;
};

struct JointAnnotation {
  double roll = 0.0;  // selected sweep angle, radians
  double score = 0.0;
  int candidates_hit = 0;
  bool overridden = false;
};

struct AnnotationResult {
  std::array<Mat3d, kActuated> frames;
  std::array<JointAnnotation, kActuated> joints;
};

inline constexpr double kDefaultAnnotationResolution = kPi / 180.0;

// Unit vector from an actuated joint to its child in the rest pose.
Vec3d compute_twist_axis(const HandSkeleton& skeleton, int joint);

// -n_splay.m_splay - n_bend.m_bend + |p_splay - o| / |p_bend - o|.
// Throws RayMissError naming the axis whose ray missed.
double annotation_loss(const FrameCandidate& candidate, const TriMesh& mesh, const Vec3d& origin);

// Candidate for a roll angle measured from the palm-back direction projected
// onto the plane normal to the twist axis.
FrameCandidate candidate_at_roll(const Vec3d& twist, const Vec3d& palm_back, double roll);

// Applies one override to a frame; throws InputError for an explicit bend
// axis within 1 degree of the twist axis.
Mat3d apply_override(const Mat3d& frame, const std::variant<double, Vec3d>& adjustment);

// Sweeps the roll at `resolution` radians (0 < resolution <= 10 degrees),
// keeps candidates whose splay axis points toward the palm back, takes the
// lowest loss (smallest roll on ties) and finally applies overrides.
AnnotationResult annotate_frames(const HandSkeleton& skeleton, const TriMesh& mesh,
                                 const std::vector<FrameOverride>& overrides = {},
                                 double resolution = kDefaultAnnotationResolution);

}  // namespace handsem
