#pragma once

// Procedural hands and motions for tests and demos.
//
// The synthetic hand lies palm-down: fingers extend along +x, the back of
// the hand faces +z, the thumb sits on the +y side. Every finger segment is
// an oriented box whose cross-section is wider side-to-side than
// dorsal-palmar, and the ground-truth TBS frame of each joint is the box's
// own (length, width, height) axes.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "handsem/hand_model.hpp"
#include "handsem/mesh.hpp"
#include "handsem/objectives.hpp"

namespace handsem {

struct HandSpec {
  std::array<Vec3d, kFingers> mcp_positions;                      // wrist -> MCP, meters
  std::array<std::array<double, 3>, kFingers> segment_lengths;    // MCP-PIP, PIP-DIP, DIP-tip
  std::array<double, kFingers> widths;                            // side-to-side, meters
  std::array<double, kFingers> headings;                          // finger direction in the palm plane, radians
  double thickness_ratio = 0.75;                                  // dorsal-palmar / side-to-side
  Vec3d thumb_direction{0.62, 0.62, -0.48};
  Vec3d thumb_back{-0.35, 0.45, 0.82};  // thumb nail direction before orthogonalization
  std::uint64_t seed = 1;
  double jitter = 1.0;  // scale of the seeded perturbations of finger directions

  static HandSpec defaults();
  // All lengths, widths and MCP positions times s.
  HandSpec scaled(double s) const;
  // Finger segment lengths times s; palm unchanged.
  HandSpec with_finger_length_scale(double s) const;
};

struct SyntheticHand {
  HandSkeleton skeleton;
  TriMesh mesh;
};

// Throws InputError on non-positive dimensions.
SyntheticHand make_synthetic_hand(const HandSpec& spec);

// TBS-local rotation built from Euler angles, bend-dominant.
inline Quatd tbs_rotation(double bend, double splay = 0.0, double twist = 0.0) {
  return compose_tbs_euler({twist, bend, splay});
}

enum class FixtureMotion { rest, curl, pinch, sweep };
std::string_view fixture_motion_name(FixtureMotion m);
FixtureMotion fixture_motion_from_name(std::string_view name);

// Sample TBS-local motions on a skeleton. The pinch ends with the thumb and
// index tips 6 mm apart (pads touching); the curl closes every finger within its anatomical
// range; the sweep bends one finger at a time.
MotionSequence make_fixture_motion(FixtureMotion kind, const HandSkeleton& skeleton, int frames = 8,
                                   double fps = 5.0);

double thumb_index_tip_distance(const MotionSequence& q_tbs, const HandSkeleton& skeleton, int frame);

// Sum of bone lengths from the middle MCP to its tip plus the wrist offset.
double hand_length(const HandSkeleton& skeleton);

}  // namespace handsem
