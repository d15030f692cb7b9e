#include <doctest.h>

#include "handsem/error.hpp"
#include "handsem/io.hpp"
#include "handsem/synthetic.hpp"
#include "support.hpp"

using namespace handsem;
using namespace handsem::testing;

TEST_SUITE("synthetic") {
  TEST_CASE("scaling the hand scales offsets and keeps the frames") {
    const HandSkeleton a = make_synthetic_hand(HandSpec::defaults()).skeleton;
    const HandSkeleton b = make_synthetic_hand(HandSpec::defaults().scaled(2.0)).skeleton;
    for (int j = 0; j < kJoints; ++j) CHECK(norm(b.joint(j).offset - a.joint(j).offset * 2.0) < 1e-15);
    for (int i = 0; i < kActuated; ++i) CHECK(rotation_angle_between(a.rest_tbs(i), b.rest_tbs(i)) < 1e-12);
    CHECK(hand_length(b) == doctest::Approx(2.0 * hand_length(a)).epsilon(1e-14));
  }

  TEST_CASE("finger length scaling leaves the palm alone") {
    const HandSkeleton a = make_synthetic_hand(HandSpec::defaults()).skeleton;
    const HandSkeleton b = make_synthetic_hand(HandSpec::defaults().with_finger_length_scale(1.3)).skeleton;
    for (int f = 0; f < kFingers; ++f) {
      CHECK(b.joint(joint_index(f, 0)).offset == a.joint(joint_index(f, 0)).offset);
      for (int s = 1; s < 4; ++s)
        CHECK(norm(b.joint(joint_index(f, s)).offset) ==
              doctest::Approx(1.3 * norm(a.joint(joint_index(f, s)).offset)).epsilon(1e-12));
    }
  }

  TEST_CASE("the same seed gives the same hand") {
    const SyntheticHand a = make_synthetic_hand(HandSpec::defaults());
    const SyntheticHand b = make_synthetic_hand(HandSpec::defaults());
    CHECK(skeleton_to_json(a.skeleton) == skeleton_to_json(b.skeleton));
    CHECK(mesh_to_obj(a.mesh) == mesh_to_obj(b.mesh));
    HandSpec other = HandSpec::defaults();
    other.seed = 2;
    CHECK(skeleton_to_json(make_synthetic_hand(other).skeleton) != skeleton_to_json(a.skeleton));
  }

  TEST_CASE("fixture motions") {
    const HandSkeleton skel = make_synthetic_hand(HandSpec::defaults()).skeleton;
    const MotionSequence pinch = make_fixture_motion(FixtureMotion::pinch, skel, 8);
    CHECK(thumb_index_tip_distance(pinch, skel, 0) > 0.05);
    CHECK(thumb_index_tip_distance(pinch, skel, 7) < 0.01);
    const MotionSequence curl = make_fixture_motion(FixtureMotion::curl, skel, 8);
    CHECK(anatomical_terms(curl).total() < 1e-24);
    const MotionSequence rest = make_fixture_motion(FixtureMotion::rest, skel, 3);
    for (const Quatd& q : rest.rotations()) CHECK(q == Quatd::identity());
    CHECK(make_fixture_motion(FixtureMotion::sweep, skel, 5).frames() == 5);
    CHECK(fixture_motion_from_name("sweep") == FixtureMotion::sweep);
    CHECK(fixture_motion_name(FixtureMotion::pinch) == "pinch");
    CHECK_THROWS_AS(fixture_motion_from_name("wave"), InputError);
  }

  TEST_CASE("every segment is covered by the mesh") {
    const SyntheticHand h = make_synthetic_hand(HandSpec::defaults());
    const auto rest = h.skeleton.rest_positions();
    for (int f = 0; f < kFingers; ++f)
      for (int s = 0; s < 3; ++s) {
        const Vec3d mid = (rest[joint_index(f, s)] + rest[joint_index(f, s + 1)]) * 0.5;
        const Vec3d up = h.skeleton.rest_tbs(actuated_index(f, s)).col(2);
        CHECK(h.mesh.intersect(mid, up).has_value());
        CHECK(h.mesh.intersect(mid, -up).has_value());
      }
  }

  TEST_CASE("bad specs are rejected") {
    HandSpec s = HandSpec::defaults();
    s.widths[2] = 0.0;
    CHECK_THROWS_AS(make_synthetic_hand(s), InputError);
    CHECK_THROWS_AS(make_synthetic_hand(HandSpec::defaults().scaled(-1.0)), InputError);
  }
}
