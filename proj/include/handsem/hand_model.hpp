#pragma once

// Hand skeleton, joint-rotation sequences and forward kinematics.
//
// Joint layout is fixed: five fingers ordered thumb, index, middle, ring,
// pinky; each finger is a chain root(MCP) -> PIP -> DIP -> tip, so joint
// 4*f + s is segment s of finger f. The 15 actuated joints are the non-tip
// joints, numbered 3*f + s. Every 20-long or 15-long array in the library
// uses this order.
//
// The wrist sits at a fixed anchor (identity rotation at the origin unless
// a RigidTransform is supplied); only finger rotations are carried.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "handsem/math.hpp"

namespace handsem {

inline constexpr int kFingers = 5;
inline constexpr int kJointsPerFinger = 4;
inline constexpr int kJoints = 20;
inline constexpr int kActuated = 15;

enum class Finger { thumb = 0, index, middle, ring, pinky };

std::string_view finger_name(Finger f);
Finger finger_from_name(std::string_view name);  // throws InputError

constexpr int joint_index(int finger, int segment) { return kJointsPerFinger * finger + segment; }
constexpr int actuated_index(int finger, int segment) { return 3 * finger + segment; }
constexpr bool is_tip(int joint) { return joint % kJointsPerFinger == 3; }
constexpr bool is_root(int joint) { return joint % kJointsPerFinger == 0; }
constexpr int parent_of(int joint) { return is_root(joint) ? -1 : joint - 1; }
constexpr int joint_of_actuated(int a) { return kJointsPerFinger * (a / 3) + a % 3; }
// Actuated index of a joint; tips map to their parent's actuated index.
constexpr int frame_source(int joint) { return 3 * (joint / kJointsPerFinger) + std::min(joint % kJointsPerFinger, 2); }
// The knuckle (MCP) joints, thumb included.
constexpr bool is_knuckle_actuated(int a) { return a % 3 == 0; }

struct Joint {
  std::string name;
  int parent = -1;
  Vec3d offset;  // rest offset in the parent frame, meters
  Finger finger = Finger::thumb;
  bool actuated = true;
};

struct ShapeParams {
  enum class Kind { mano, offsets };
  Kind kind = Kind::offsets;
  std::vector<double> values;

  static std::size_t expected_length(Kind k) { return k == Kind::mano ? 10 : 45; }
};

std::string_view shape_kind_name(ShapeParams::Kind k);
ShapeParams::Kind shape_kind_from_name(std::string_view name);

// Validated, immutable hand description. Construction throws InputError when
// any topology, frame or shape invariant is violated.
class HandSkeleton {
 public:
  HandSkeleton(std::vector<Joint> joints, std::array<Mat3d, kActuated> rest_tbs, ShapeParams shape,
               Vec3d palm_back = {0.0, 0.0, 1.0});

  const std::vector<Joint>& joints() const { return joints_; }
  const Joint& joint(int j) const { return joints_[j]; }
  const std::array<Mat3d, kActuated>& rest_tbs() const { return rest_tbs_; }
  const Mat3d& rest_tbs(int actuated) const { return rest_tbs_[actuated]; }
  const Quatd& rest_tbs_quat(int actuated) const { return rest_quat_[actuated]; }
  const ShapeParams& shape() const { return shape_; }
  const Vec3d& palm_back() const { return palm_back_; }

  // Global joint positions in the rest pose (wrist at origin).
  std::array<Vec3d, kJoints> rest_positions() const;
  int find_joint(std::string_view name) const;  // -1 when absent

  HandSkeleton with_rest_tbs(const std::array<Mat3d, kActuated>& rest_tbs) const;

  friend bool operator==(const HandSkeleton& a, const HandSkeleton& b);

 private:
  std::vector<Joint> joints_;
  std::array<Mat3d, kActuated> rest_tbs_;
  std::array<Quatd, kActuated> rest_quat_;
  ShapeParams shape_;
  Vec3d palm_back_;
};

enum class Convention { tbs_local, global };
std::string_view convention_name(Convention c);
Convention convention_from_name(std::string_view name);

// T frames x 15 actuated joint rotations.
class MotionSequence {
 public:
  // Throws InputError("empty sequence") for zero frames, and on size or
  // unit-norm violations.
  MotionSequence(int frames, std::vector<Quatd> rotations, Convention convention, double fps = 30.0);

  static MotionSequence identity(int frames, Convention convention, double fps = 30.0);

  int frames() const { return frames_; }
  Convention convention() const { return convention_; }
  double fps() const { return fps_; }
  const std::vector<Quatd>& rotations() const { return rotations_; }
  const Quatd& at(int t, int a) const { return rotations_[static_cast<std::size_t>(t) * kActuated + a]; }
  std::span<const Quatd, kActuated> frame(int t) const {
    return std::span<const Quatd, kActuated>(rotations_.data() + static_cast<std::size_t>(t) * kActuated, kActuated);
  }
  MotionSequence slice(int begin, int count) const;

 private:
  int frames_;
  std::vector<Quatd> rotations_;
  Convention convention_;
  double fps_;
};

struct RigidTransform {
  Mat3d rotation = Mat3d::identity();
  Vec3d translation;
};

struct PoseFK {
  int frames = 0;
  std::vector<Vec3d> positions;   // frames x 20
  std::vector<Mat3d> tbs_orient;  // frames x 20
  std::vector<Vec3d> wrist;       // frames

  const Vec3d& position(int t, int j) const { return positions[static_cast<std::size_t>(t) * kJoints + j]; }
  const Mat3d& orient(int t, int j) const { return tbs_orient[static_cast<std::size_t>(t) * kJoints + j]; }
};

// q_global = r q_tbs r^-1 with r the rest TBS orientation of the joint.
MotionSequence tbs_to_global(const MotionSequence& motion, const HandSkeleton& skeleton);
MotionSequence global_to_tbs(const MotionSequence& motion, const HandSkeleton& skeleton);

PoseFK forward_kinematics(const MotionSequence& motion, const HandSkeleton& skeleton,
                          const RigidTransform& wrist = {});

// Single-frame kinematics, generic over the scalar type.
template <class S>
struct FramePose {
  std::array<Vec3<S>, kJoints> position;
  std::array<Mat3<S>, kJoints> tbs;
};

template <class S>
Quat<S> tbs_local_to_global(const Quat<S>& q_tbs, const Quatd& rest) {
  return (rest * q_tbs) * rest.conjugate();
}

template <class S>
FramePose<S> pose_frame(const HandSkeleton& skeleton, std::span<const Quat<S>, kActuated> global_rot,
                        const RigidTransform& wrist = {}) {
  FramePose<S> out;
  for (int f = 0; f < kFingers; ++f) {
    Mat3<S> accum(wrist.rotation);
    Vec3<S> pos(wrist.translation);
    for (int s = 0; s < kJointsPerFinger; ++s) {
      const int j = joint_index(f, s);
      pos = pos + accum * skeleton.joint(j).offset;
      out.position[j] = pos;
      if (s < 3) accum = accum * global_rot[actuated_index(f, s)].to_matrix();
      out.tbs[j] = accum * skeleton.rest_tbs(frame_source(j));
    }
  }
  return out;
}

}  // namespace handsem
