#include "handsem/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "handsem/error.hpp"

namespace handsem {

namespace {

constexpr std::array<std::string_view, 4> kSegmentNames = {"mcp", "pip", "dip", "tip"};
constexpr std::array<double, 3> kTaper = {1.0, 0.92, 0.85};
constexpr double kDeg = kPi / 180.0;

struct SegmentFrame {
  Vec3d twist, bend, splay;
};

// Oriented box with per-face vertices so vertex normals equal face normals.
void append_box(const Vec3d& start, const SegmentFrame& f, double length, double width, double height,
                std::vector<Vec3d>& verts, std::vector<TriMesh::Triangle>& tris, std::vector<Vec3d>& normals) {
  const Vec3d ax[3] = {f.twist * length, f.bend * width, f.splay * height};
  const Vec3d origin = start - f.bend * (0.5 * width) - f.splay * (0.5 * height);
  auto corner = [&](int i, int j, int k) { return origin + ax[0] * i + ax[1] * j + ax[2] * k; };
  // Each face: outward normal and four corners in counter-clockwise order.
  struct Face {
    Vec3d n;
    std::array<std::array<int, 3>, 4> c;
  };
  const Face faces[6] = {
      {-f.twist, {{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}}}},
      {f.twist, {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}}},
      {-f.bend, {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}}},
      {f.bend, {{{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}}},
      {-f.splay, {{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}}},
      {f.splay, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}}},
  };
  for (const Face& face : faces) {
    const int base = static_cast<int>(verts.size());
    for (const auto& c : face.c) {
      verts.push_back(corner(c[0], c[1], c[2]));
      normals.push_back(face.n);
    }
    tris.push_back({base, base + 1, base + 2});
    tris.push_back({base, base + 2, base + 3});
  }
}

Vec3d rotate_about(const Vec3d& v, const Vec3d& axis, double angle) { return axis_angle_matrix(axis, angle) * v; }

}  // namespace

HandSpec HandSpec::defaults() {
  HandSpec s;
  s.mcp_positions = {Vec3d{0.022, 0.028, -0.012}, Vec3d{0.088, 0.026, 0.0}, Vec3d{0.092, 0.006, 0.0},
                     Vec3d{0.087, -0.013, 0.0}, Vec3d{0.079, -0.030, 0.0}};
  s.segment_lengths = {{{0.038, 0.032, 0.027},
                        {0.044, 0.026, 0.021},
                        {0.048, 0.030, 0.023},
                        {0.045, 0.028, 0.022},
                        {0.035, 0.021, 0.019}}};
  s.widths = {0.021, 0.018, 0.018, 0.017, 0.015};
  s.headings = {0.0, 8.0 * kDeg, 0.0, -7.0 * kDeg, -14.0 * kDeg};
  return s;
}

HandSpec HandSpec::scaled(double f) const {
  HandSpec s = *this;
  for (auto& p : s.mcp_positions) p = p * f;
  for (auto& seg : s.segment_lengths)
    for (double& l : seg) l *= f;
  for (double& w : s.widths) w *= f;
  return s;
}

HandSpec HandSpec::with_finger_length_scale(double f) const {
  HandSpec s = *this;
  for (auto& seg : s.segment_lengths)
    for (double& l : seg) l *= f;
  return s;
}

SyntheticHand make_synthetic_hand(const HandSpec& spec) {
  if (!(spec.thickness_ratio > 0.0) || spec.jitter < 0.0)
    throw InputError("hand spec needs a positive thickness ratio and a nonnegative jitter");
  for (int f = 0; f < kFingers; ++f) {
    if (!(spec.widths[f] > 0.0)) throw InputError("finger widths must be positive");
    for (double l : spec.segment_lengths[f])
      if (!(l > 0.0)) throw InputError("finger segment lengths must be positive");
  }
  if (!(norm(spec.thumb_direction) > 0.0) || !(norm(cross(spec.thumb_direction, spec.thumb_back)) > 0.0))
    throw InputError("thumb direction and back hint must be nonzero and non-parallel");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Vec3d up{0.0, 0.0, 1.0};

  std::vector<Joint> joints;
  std::array<Mat3d, kActuated> rest_tbs;
  std::vector<Vec3d> verts, normals;
  std::vector<TriMesh::Triangle> tris;

  for (int f = 0; f < kFingers; ++f) {
    const double fan = 2.0 * kDeg * spec.jitter * unit(rng);
    const double roll = 4.0 * kDeg * spec.jitter * unit(rng);
    std::array<double, 3> pitch;
    for (double& p : pitch) p = 4.0 * kDeg * spec.jitter * 0.5 * (unit(rng) + 1.0);

    Vec3d dir, back;
    if (f == 0) {
      dir = rotate_about(normalized(spec.thumb_direction), up, fan);
      const Vec3d hint = rotate_about(spec.thumb_back, up, fan);
      back = normalized(hint - dir * dot(hint, dir));
    } else {
      dir = {std::cos(spec.headings[f] + fan), std::sin(spec.headings[f] + fan), 0.0};
      back = up;
    }
    const Vec3d lateral = normalized(cross(back, dir));

    Vec3d pos = spec.mcp_positions[f];
    Vec3d offset = pos;
    double curl = 0.0;
    for (int s = 0; s < kJointsPerFinger; ++s) {
      Joint jt;
      jt.name = std::string(finger_name(static_cast<Finger>(f))) + "_" + std::string(kSegmentNames[s]);
      jt.parent = parent_of(joint_index(f, s));
      jt.finger = static_cast<Finger>(f);
      jt.actuated = s < 3;
      jt.offset = offset;
      joints.push_back(std::move(jt));
      if (s == 3) break;

      curl += pitch[s];
      SegmentFrame fr;
      fr.twist = normalized(rotate_about(dir, lateral, curl));
      const Vec3d b = rotate_about(back, lateral, curl);
      fr.splay = normalized(rotate_about(b - fr.twist * dot(b, fr.twist), fr.twist, roll));
      fr.bend = normalized(cross(fr.splay, fr.twist));
      fr.splay = cross(fr.twist, fr.bend);
      rest_tbs[actuated_index(f, s)] = Mat3d::from_columns(fr.twist, fr.bend, fr.splay);

      const double len = spec.segment_lengths[f][s];
      const double width = spec.widths[f] * kTaper[s];
      const double back_gap = 0.3 * width;
      const double box_len = s == 2 ? len + back_gap : len;
      append_box(pos - fr.twist * back_gap, fr, box_len, width, width * spec.thickness_ratio, verts, tris, normals);

      // Rest offsets are expressed in the wrist frame.
      offset = fr.twist * len;
      pos = pos + offset;
    }
  }

  ShapeParams shape;
  shape.kind = ShapeParams::Kind::offsets;
  double length = norm(joints[joint_index(2, 0)].offset);
  for (int s = 1; s < kJointsPerFinger; ++s) length += norm(joints[joint_index(2, s)].offset);
  for (const Joint& j : joints) {
    if (j.parent < 0) continue;
    for (int c = 0; c < 3; ++c) shape.values.push_back(j.offset[c] / length);
  }
  return {HandSkeleton(std::move(joints), rest_tbs, std::move(shape), up), TriMesh(verts, tris, normals)};
}

}  // namespace handsem
namespace handsem {

namespace {

constexpr double kBendMargin = 0.05;
// Skeletal tips sit on the bone axis, so pads in contact leave a gap.
constexpr double kPinchGap = 0.006;

struct PinchPose {
  std::array<double, 7> v{};  // thumb mcp bend, thumb mcp splay, thumb pip, thumb dip, index mcp, pip, dip
};

std::array<EulerTBS, kActuated> pinch_angles(const PinchPose& p, double ramp) {
  std::array<EulerTBS, kActuated> e{};
  e[actuated_index(0, 0)] = {0.0, p.v[0] * ramp, p.v[1] * ramp};
  e[actuated_index(0, 1)] = {0.0, p.v[2] * ramp, 0.0};
  e[actuated_index(0, 2)] = {0.0, p.v[3] * ramp, 0.0};
  for (int s = 0; s < 3; ++s) e[actuated_index(1, s)] = {0.0, p.v[4 + s] * ramp, 0.0};
  const std::array<double, 3> rest_curl = {0.4, 0.5, 0.3};
  for (int f = 2; f < kFingers; ++f)
    for (int s = 0; s < 3; ++s) e[actuated_index(f, s)] = {0.0, rest_curl[s] * ramp, 0.0};
  return e;
}

std::array<Quatd, kActuated> to_global(const std::array<EulerTBS, kActuated>& e, const HandSkeleton& skel) {
  std::array<Quatd, kActuated> g;
  for (int a = 0; a < kActuated; ++a) g[a] = tbs_local_to_global(compose_tbs_euler(e[a]), skel.rest_tbs_quat(a));
  return g;
}

double tip_gap(std::span<const Quatd, kActuated> global, const HandSkeleton& skel) {
  const FramePose<double> pose = pose_frame<double>(skel, global);
  return norm(pose.position[joint_index(0, 3)] - pose.position[joint_index(1, 3)]);
}

double pinch_gap(const PinchPose& p, const HandSkeleton& skel) {
  const auto g = to_global(pinch_angles(p, 1.0), skel);
  return std::abs(tip_gap(g, skel) - kPinchGap);
}

std::pair<double, double> pinch_bounds(int i) {
  if (i == 1) return {-kKnuckleSplayLimit + 0.01, kKnuckleSplayLimit - 0.01};
  return {kBendMargin, kPi / 2.0 - kBendMargin};
}

// Grid over the thumb with a fixed index shape, then coordinate descent
// over all seven angles with a halving step, aiming at kPinchGap.
PinchPose solve_pinch(const HandSkeleton& skel) {
  PinchPose best;
  best.v = {0.6, 0.0, 0.6, 0.4, 0.6, 0.7, 0.4};
  double best_gap = pinch_gap(best, skel);
  PinchPose p = best;
  for (double b0 = 0.1; b0 < 1.55; b0 += 0.2)
    for (double sp = -0.15; sp <= 0.151; sp += 0.075)
      for (double b1 = 0.1; b1 < 1.55; b1 += 0.2)
        for (double b2 = 0.1; b2 < 1.55; b2 += 0.2) {
          p.v[0] = b0;
          p.v[1] = sp;
          p.v[2] = b1;
          p.v[3] = b2;
          const double gap = pinch_gap(p, skel);
          if (gap < best_gap) {
            best_gap = gap;
            best = p;
          }
        }
  for (double step = 0.1; step > 1e-7; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < 7; ++i) {
        for (double sign : {1.0, -1.0}) {
          PinchPose trial = best;
          const auto [lo, hi] = pinch_bounds(i);
          trial.v[i] = std::clamp(trial.v[i] + sign * step, lo, hi);
          const double gap = pinch_gap(trial, skel);
          if (gap < best_gap - 1e-15) {
            best_gap = gap;
            best = trial;
            improved = true;
          }
        }
      }
    }
  }
  return best;
}

MotionSequence from_angles(const std::vector<std::array<EulerTBS, kActuated>>& frames, double fps) {
  std::vector<Quatd> rot;
  rot.reserve(frames.size() * kActuated);
  for (const auto& f : frames)
    for (const EulerTBS& e : f) rot.push_back(compose_tbs_euler(e));
  return MotionSequence(static_cast<int>(frames.size()), std::move(rot), Convention::tbs_local, fps);
}

}  // namespace

std::string_view fixture_motion_name(FixtureMotion m) {
  switch (m) {
    case FixtureMotion::rest:
      return "rest";
    case FixtureMotion::curl:
      return "curl";
    case FixtureMotion::pinch:
      return "pinch";
    case FixtureMotion::sweep:
      return "sweep";
  }
  return "rest";
}

FixtureMotion fixture_motion_from_name(std::string_view name) {
  for (FixtureMotion m : {FixtureMotion::rest, FixtureMotion::curl, FixtureMotion::pinch, FixtureMotion::sweep})
    if (fixture_motion_name(m) == name) return m;
  throw InputError("unknown fixture motion '" + std::string(name) + "' (expected rest, curl, pinch or sweep)");
}

MotionSequence make_fixture_motion(FixtureMotion kind, const HandSkeleton& skeleton, int frames, double fps) {
  if (frames < 1) throw InputError("empty sequence");
  std::vector<std::array<EulerTBS, kActuated>> seq(static_cast<std::size_t>(frames));
  auto ramp = [frames](int t) { return frames == 1 ? 1.0 : static_cast<double>(t) / (frames - 1); };
  switch (kind) {
    case FixtureMotion::rest:
      break;
    case FixtureMotion::curl: {
      const std::array<std::array<double, 3>, kFingers> gain = {
          {{0.5, 0.7, 0.6}, {0.8, 1.0, 0.7}, {0.8, 1.0, 0.7}, {0.8, 1.0, 0.7}, {0.8, 1.0, 0.7}}};
      const std::array<double, kFingers> knuckle_splay = {0.03, 0.05, 0.0, -0.04, -0.08};
      for (int t = 0; t < frames; ++t)
        for (int f = 0; f < kFingers; ++f)
          for (int s = 0; s < 3; ++s)
            seq[t][actuated_index(f, s)] = {0.0, (0.1 + 1.2 * ramp(t)) * gain[f][s],
                                            s == 0 ? knuckle_splay[f] * ramp(t) : 0.0};
      break;
    }
    case FixtureMotion::pinch: {
      const PinchPose peak = solve_pinch(skeleton);
      for (int t = 0; t < frames; ++t) seq[t] = pinch_angles(peak, ramp(t));
      break;
    }
    case FixtureMotion::sweep:
      for (int t = 0; t < frames; ++t) {
        const int active = t % kFingers;
        for (int f = 0; f < kFingers; ++f)
          for (int s = 0; s < 3; ++s) seq[t][actuated_index(f, s)] = {0.0, f == active ? 1.2 : 0.1, 0.0};
      }
      break;
  }
  return from_angles(seq, fps);
}

double thumb_index_tip_distance(const MotionSequence& q, const HandSkeleton& skeleton, int frame) {
  if (frame < 0 || frame >= q.frames()) throw InputError("frame out of range");
  std::array<Quatd, kActuated> g;
  for (int a = 0; a < kActuated; ++a)
    g[a] = q.convention() == Convention::global ? q.at(frame, a)
                                                : tbs_local_to_global(q.at(frame, a), skeleton.rest_tbs_quat(a));
  return tip_gap(g, skeleton);
}

double hand_length(const HandSkeleton& skeleton) {
  double length = 0.0;
  for (int s = 0; s < kJointsPerFinger; ++s) length += norm(skeleton.joint(joint_index(2, s)).offset);
  return length;
}

}  // namespace handsem
