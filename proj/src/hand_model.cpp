#include "handsem/hand_model.hpp"

#include <cmath>
#include <string>

#include "handsem/error.hpp"

namespace handsem {

namespace {

constexpr std::array<std::string_view, kFingers> kFingerNames = {"thumb", "index", "middle", "ring", "pinky"};

void check_topology(const std::vector<Joint>& joints) {
  if (joints.size() != static_cast<std::size_t>(kJoints))
    throw InputError("hand skeleton needs exactly 20 joints, got " + std::to_string(joints.size()));
  for (int j = 0; j < kJoints; ++j) {
    const Joint& jt = joints[j];
    const int finger = j / kJointsPerFinger;
    if (jt.parent != parent_of(j))
      throw InputError("joint " + std::to_string(j) + " (" + jt.name + "): parent must be " +
                       std::to_string(parent_of(j)) + ", got " + std::to_string(jt.parent));
    if (static_cast<int>(jt.finger) != finger)
      throw InputError("joint " + std::to_string(j) + " (" + jt.name + "): expected finger " +
                       std::string(kFingerNames[finger]));
    if (jt.actuated == is_tip(j))
      throw InputError("joint " + std::to_string(j) + " (" + jt.name + "): actuated flag must be " +
                       (is_tip(j) ? "false for a fingertip" : "true"));
    for (int c = 0; c < 3; ++c)
      if (!std::isfinite(jt.offset[c])) throw InputError("joint " + jt.name + ": non-finite offset");
    if (!is_root(j) && norm(jt.offset) == 0.0) throw InputError("joint " + jt.name + ": zero rest offset");
  }
}

}  // namespace

std::string_view finger_name(Finger f) { return kFingerNames[static_cast<int>(f)]; }

Finger finger_from_name(std::string_view name) {
  for (int f = 0; f < kFingers; ++f)
    if (kFingerNames[f] == name) return static_cast<Finger>(f);
  throw InputError("unknown finger '" + std::string(name) + "'");
}

std::string_view shape_kind_name(ShapeParams::Kind k) { return k == ShapeParams::Kind::mano ? "mano" : "offsets"; }

ShapeParams::Kind shape_kind_from_name(std::string_view name) {
  if (name == "mano") return ShapeParams::Kind::mano;
  if (name == "offsets") return ShapeParams::Kind::offsets;
  throw InputError("unknown shape kind '" + std::string(name) + "'");
}

HandSkeleton::HandSkeleton(std::vector<Joint> joints, std::array<Mat3d, kActuated> rest_tbs, ShapeParams shape,
                           Vec3d palm_back)
    : joints_(std::move(joints)), rest_tbs_(rest_tbs), shape_(std::move(shape)), palm_back_(palm_back) {
  check_topology(joints_);
  for (int a = 0; a < kActuated; ++a) {
    if (!is_rotation(rest_tbs_[a], 1e-9))
      throw InputError("rest_tbs[" + std::to_string(a) + "] (" + joints_[joint_of_actuated(a)].name +
                       ") is not a proper rotation");
    rest_quat_[a] = quat::from_matrix(rest_tbs_[a]);
  }
  if (shape_.values.size() != ShapeParams::expected_length(shape_.kind))
    throw InputError("shape vector of kind " + std::string(shape_kind_name(shape_.kind)) + " needs " +
                     std::to_string(ShapeParams::expected_length(shape_.kind)) + " values, got " +
                     std::to_string(shape_.values.size()));
  const double pb = norm(palm_back_);
  if (!(std::abs(pb - 1.0) < 1e-6)) throw InputError("palm_back must be a unit vector");
}

std::array<Vec3d, kJoints> HandSkeleton::rest_positions() const {
  std::array<Vec3d, kJoints> out;
  for (int j = 0; j < kJoints; ++j) out[j] = (is_root(j) ? Vec3d{} : out[j - 1]) + joints_[j].offset;
  return out;
}

int HandSkeleton::find_joint(std::string_view name) const {
  for (int j = 0; j < kJoints; ++j)
    if (joints_[j].name == name) return j;
  return -1;
}

HandSkeleton HandSkeleton::with_rest_tbs(const std::array<Mat3d, kActuated>& rest_tbs) const {
  return HandSkeleton(joints_, rest_tbs, shape_, palm_back_);
}

bool operator==(const HandSkeleton& a, const HandSkeleton& b) {
  if (a.rest_tbs_ != b.rest_tbs_ || a.palm_back_ != b.palm_back_) return false;
  if (a.shape_.kind != b.shape_.kind || a.shape_.values != b.shape_.values) return false;
  for (int j = 0; j < kJoints; ++j) {
    const Joint& x = a.joints_[j];
    const Joint& y = b.joints_[j];
    if (x.name != y.name || x.parent != y.parent || x.offset != y.offset || x.finger != y.finger ||
        x.actuated != y.actuated)
      return false;
  }
  return true;
}

std::string_view convention_name(Convention c) { return c == Convention::tbs_local ? "tbs_local" : "global"; }

Convention convention_from_name(std::string_view name) {
  if (name == "tbs_local") return Convention::tbs_local;
  if (name == "global") return Convention::global;
  throw InputError("unknown rotation convention '" + std::string(name) + "'");
}

MotionSequence::MotionSequence(int frames, std::vector<Quatd> rotations, Convention convention, double fps)
    : frames_(frames), rotations_(std::move(rotations)), convention_(convention), fps_(fps) {
  if (frames_ < 1) throw InputError("empty sequence");
  if (rotations_.size() != static_cast<std::size_t>(frames_) * kActuated)
    throw InputError("motion needs " + std::to_string(frames_ * kActuated) + " rotations, got " +
                     std::to_string(rotations_.size()));
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw InputError("fps must be positive");
  for (std::size_t i = 0; i < rotations_.size(); ++i)
    if (!quat::is_unit(rotations_[i], 1e-9))
      throw InputError("rotation at frame " + std::to_string(i / kActuated) + ", joint " +
                       std::to_string(i % kActuated) + " is not unit-norm");
}

MotionSequence MotionSequence::identity(int frames, Convention convention, double fps) {
  return MotionSequence(frames, std::vector<Quatd>(static_cast<std::size_t>(std::max(frames, 0)) * kActuated),
                        convention, fps);
}

MotionSequence MotionSequence::slice(int begin, int count) const {
  if (begin < 0 || count < 1 || begin + count > frames_) throw InputError("motion slice out of range");
  std::vector<Quatd> r(rotations_.begin() + static_cast<std::ptrdiff_t>(begin) * kActuated,
                       rotations_.begin() + static_cast<std::ptrdiff_t>(begin + count) * kActuated);
  return MotionSequence(count, std::move(r), convention_, fps_);
}

MotionSequence tbs_to_global(const MotionSequence& motion, const HandSkeleton& skeleton) {
  if (motion.convention() != Convention::tbs_local) throw InputError("tbs_to_global expects a tbs_local motion");
  std::vector<Quatd> out(motion.rotations().size());
  for (int t = 0; t < motion.frames(); ++t)
    for (int a = 0; a < kActuated; ++a)
      out[static_cast<std::size_t>(t) * kActuated + a] =
          tbs_local_to_global(motion.at(t, a), skeleton.rest_tbs_quat(a));
  return MotionSequence(motion.frames(), std::move(out), Convention::global, motion.fps());
}

MotionSequence global_to_tbs(const MotionSequence& motion, const HandSkeleton& skeleton) {
  if (motion.convention() != Convention::global) throw InputError("global_to_tbs expects a global motion");
  std::vector<Quatd> out(motion.rotations().size());
  for (int t = 0; t < motion.frames(); ++t)
    for (int a = 0; a < kActuated; ++a) {
      const Quatd& r = skeleton.rest_tbs_quat(a);
      out[static_cast<std::size_t>(t) * kActuated + a] = (r.conjugate() * motion.at(t, a)) * r;
    }
  return MotionSequence(motion.frames(), std::move(out), Convention::tbs_local, motion.fps());
}

PoseFK forward_kinematics(const MotionSequence& motion, const HandSkeleton& skeleton, const RigidTransform& wrist) {
  if (motion.convention() != Convention::global) throw InputError("forward_kinematics expects a global motion");
  PoseFK fk;
  fk.frames = motion.frames();
  fk.positions.resize(static_cast<std::size_t>(fk.frames) * kJoints);
  fk.tbs_orient.resize(static_cast<std::size_t>(fk.frames) * kJoints);
  fk.wrist.assign(fk.frames, wrist.translation);
  for (int t = 0; t < fk.frames; ++t) {
    const FramePose<double> p = pose_frame<double>(skeleton, motion.frame(t), wrist);
    for (int j = 0; j < kJoints; ++j) {
      fk.positions[static_cast<std::size_t>(t) * kJoints + j] = p.position[j];
      fk.tbs_orient[static_cast<std::size_t>(t) * kJoints + j] = p.tbs[j];
    }
  }
  return fk;
}

}  // namespace handsem
