#include "handsem/semantics.hpp"

#include <cmath>
#include <string>

#include "handsem/error.hpp"
#include "handsem/parallel.hpp"

namespace handsem {

namespace {

FramePose<double> frame_pose(const PoseFK& fk, int t) {
  FramePose<double> p;
  for (int j = 0; j < kJoints; ++j) {
    p.position[j] = fk.position(t, j);
    p.tbs[j] = fk.orient(t, j);
  }
  return p;
}

}  // namespace

SemanticMatrix::SemanticMatrix(int frames)
    : frames_(frames), data_(static_cast<std::size_t>(kJoints) * frames * kAsmRows * 3, 0.0) {
  if (frames < 1) throw InputError("empty sequence");
}

SemanticMatrix::SemanticMatrix(int frames, std::vector<double> data) : frames_(frames), data_(std::move(data)) {
  if (frames < 1) throw InputError("empty sequence");
  if (data_.size() != static_cast<std::size_t>(kJoints) * frames * kAsmRows * 3)
    throw InputError("semantic matrix needs 20 x T x 29 x 3 values");
  for (double v : data_)
    if (!std::isfinite(v)) throw InputError("semantic matrix contains non-finite entries");
}

PalmAnchors palm_anchors(const PoseFK& fk) {
  PalmAnchors out;
  out.frames = fk.frames;
  out.points.resize(static_cast<std::size_t>(fk.frames) * kPalmAnchors);
  for (int t = 0; t < fk.frames; ++t) {
    const auto a = palm_anchor_frame(frame_pose(fk, t), fk.wrist[t]);
    for (int n = 0; n < kPalmAnchors; ++n) out.points[static_cast<std::size_t>(t) * kPalmAnchors + n] = a[n];
  }
  return out;
}

Vec3d inter_feature(int k, int m, const PoseFK& fk, int t) {
  if (k < 0 || k >= kJoints || m < 0 || m >= kJoints) throw InputError("joint index out of range");
  return transpose_mul(fk.orient(t, k), fk.position(t, m) - fk.position(t, k));
}

SemanticMatrix asm_from_fk(const PoseFK& fk) {
  SemanticMatrix d(fk.frames);
  parallel_for(fk.frames, [&](int t) {
    const FramePose<double> pose = frame_pose(fk, t);
    const auto anchors = palm_anchor_frame(pose, fk.wrist[t]);
    for (int k = 0; k < kJoints; ++k)
      for (int r = 0; r < kAsmRows; ++r) d.set_row(k, t, r, asm_row(pose, anchors, k, r));
  });
  return d;
}

SemanticMatrix extract_asm(const MotionSequence& motion, const HandSkeleton& skeleton, const RigidTransform& wrist) {
  return asm_from_fk(forward_kinematics(tbs_to_global(motion, skeleton), skeleton, wrist));
}

}  // namespace handsem
