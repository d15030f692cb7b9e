#pragma once

// Anatomy-based semantic matrix.
//
// For joint k and frame t the matrix holds 29 rows: the positions of all 20
// joints followed by the 9 palm anchors, each expressed in joint k's
// twist-bend-splay frame. Palm anchors sit at 1/3 and 2/3 along the
// wrist->MCP segments of the four non-thumb fingers (index..pinky, in that
// order), followed by the wrist itself.

#include <array>
#include <vector>

#include "handsem/hand_model.hpp"

namespace handsem {

inline constexpr int kPalmAnchors = 9;
inline constexpr int kInterRows = kJoints;
inline constexpr int kAsmRows = kInterRows + kPalmAnchors;

template <class S>
std::array<Vec3<S>, kPalmAnchors> palm_anchor_frame(const FramePose<S>& pose, const Vec3d& wrist) {
  std::array<Vec3<S>, kPalmAnchors> out;
  for (int f = 1; f < kFingers; ++f) {
    const Vec3<S> seg = pose.position[joint_index(f, 0)] - wrist;
    out[2 * (f - 1)] = wrist + seg * (1.0 / 3.0);
    out[2 * (f - 1) + 1] = wrist + seg * (2.0 / 3.0);
  }
  out[8] = Vec3<S>(wrist);
  return out;
}

// Row `row` of joint k's semantic matrix.
template <class S>
Vec3<S> asm_row(const FramePose<S>& pose, const std::array<Vec3<S>, kPalmAnchors>& anchors, int k, int row) {
  const Vec3<S>& target = row < kInterRows ? pose.position[row] : anchors[row - kInterRows];
  return transpose_mul(pose.tbs[k], target - pose.position[k]);
}

struct PalmAnchors {
  int frames = 0;
  std::vector<Vec3d> points;  // frames x 9

  const Vec3d& at(int t, int n) const { return points[static_cast<std::size_t>(t) * kPalmAnchors + n]; }
};

// 20 x T x 29 x 3 tensor, stored in exactly that (joint, frame, row, xyz)
// order.
class SemanticMatrix {
 public:
  SemanticMatrix() = default;
  explicit SemanticMatrix(int frames);
  SemanticMatrix(int frames, std::vector<double> data);

  int frames() const { return frames_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  static std::size_t offset(int frames, int k, int t, int row) {
    return ((static_cast<std::size_t>(k) * frames + t) * kAsmRows + row) * 3;
  }
  Vec3d row(int k, int t, int r) const {
    const double* p = data_.data() + offset(frames_, k, t, r);
    return {p[0], p[1], p[2]};
  }
  void set_row(int k, int t, int r, const Vec3d& v) {
    double* p = data_.data() + offset(frames_, k, t, r);
    p[0] = v.x;
    p[1] = v.y;
    p[2] = v.z;
  }

 private:
  int frames_ = 0;
  std::vector<double> data_;
};

PalmAnchors palm_anchors(const PoseFK& fk);

// Coordinates of joint m in joint k's frame at frame t.
Vec3d inter_feature(int k, int m, const PoseFK& fk, int t = 0);

SemanticMatrix asm_from_fk(const PoseFK& fk);

// tbs_to_global -> forward_kinematics -> palm anchors -> per-joint rows.
SemanticMatrix extract_asm(const MotionSequence& motion, const HandSkeleton& skeleton,
                           const RigidTransform& wrist = {});

}  // namespace handsem
