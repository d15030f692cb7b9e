#include <doctest.h>

#include "handsem/error.hpp"
#include "handsem/semantics.hpp"
#include "handsem/synthetic.hpp"
#include "support.hpp"

using namespace handsem;
using namespace handsem::testing;

TEST_SUITE("semantics") {
  TEST_CASE("rest anchors: wrist last, thirds of the wrist-MCP segments") {
    const HandSkeleton skel = make_synthetic_hand(HandSpec::defaults()).skeleton;
    const PalmAnchors a = palm_anchors(forward_kinematics(MotionSequence::identity(1, Convention::global), skel));
    CHECK(norm(a.at(0, 8)) == 0.0);
    for (int f = 1; f < kFingers; ++f) {
      const Vec3d mcp = skel.joint(joint_index(f, 0)).offset;
      CHECK(norm(a.at(0, 2 * (f - 1)) - mcp / 3.0) < 1e-15);
      CHECK(norm(a.at(0, 2 * (f - 1) + 1) - mcp * (2.0 / 3.0)) < 1e-15);
    }
  }

  TEST_CASE("anchors follow rigid motion and scaling of the hand") {
    Rng rng(41);
    HandSpec spec = HandSpec::defaults();
    const HandSkeleton skel = make_synthetic_hand(spec).skeleton;
    const HandSkeleton big = make_synthetic_hand(spec.scaled(2.0)).skeleton;
    const MotionSequence m = random_motion(rng, 2);
    const RigidTransform w{random_rotation(rng).to_matrix(), {0.0, 0.0, 0.0}};
    const PalmAnchors a = palm_anchors(fk_of(m, skel));
    const PalmAnchors r = palm_anchors(forward_kinematics(tbs_to_global(m, skel), skel, w));
    const PalmAnchors s = palm_anchors(fk_of(m, big));
    for (int t = 0; t < 2; ++t)
      for (int n = 0; n < kPalmAnchors; ++n) {
        CHECK(norm(r.at(t, n) - w.rotation * a.at(t, n)) < 1e-15);
        CHECK(norm(s.at(t, n) - a.at(t, n) * 2.0) < 1e-14);
      }
  }

  TEST_CASE("inter feature: self row and identity frame") {
    PoseFK fk;
    fk.frames = 1;
    fk.positions.assign(kJoints, Vec3d{});
    fk.tbs_orient.assign(kJoints, Mat3d::identity());
    fk.wrist.assign(1, Vec3d{});
    fk.positions[5] = {1.0, 2.0, 3.0};
    CHECK(inter_feature(5, 5, fk) == Vec3d{0, 0, 0});
    CHECK(inter_feature(0, 5, fk) == Vec3d{1, 2, 3});
    CHECK_THROWS_AS(inter_feature(0, 20, fk), InputError);
  }

  TEST_CASE("inter feature matches an explicit transpose multiply") {
    Rng rng(42);
    const HandSkeleton skel = random_skeleton(rng);
    const PoseFK fk = fk_of(random_motion(rng, 2), skel);
    for (int t = 0; t < 2; ++t)
      for (int k = 0; k < kJoints; ++k)
        for (int m = 0; m < kJoints; ++m) {
          const Mat3d& r = fk.orient(t, k);
          const Vec3d d = fk.position(t, m) - fk.position(t, k);
          Vec3d ref;
          for (int i = 0; i < 3; ++i) ref[i] = r(0, i) * d.x + r(1, i) * d.y + r(2, i) * d.z;
          CHECK(norm(inter_feature(k, m, fk, t) - ref) < 1e-12);
        }
  }

  TEST_CASE("ASM layout") {
    Rng rng(43);
    const HandSkeleton skel = random_skeleton(rng);
    const MotionSequence m = random_motion(rng, 3);
    const PoseFK fk = fk_of(m, skel);
    const SemanticMatrix d = extract_asm(m, skel);
    CHECK(d.data().size() == 20u * 3u * 29u * 3u);
    CHECK(SemanticMatrix::offset(3, 1, 2, 4) == ((1 * 3 + 2) * 29 + 4) * 3);
    const PalmAnchors anchors = palm_anchors(fk);
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < kJoints; ++k) {
        for (int r = 0; r < kJoints; ++r) CHECK(norm(d.row(k, t, r) - inter_feature(k, r, fk, t)) < 1e-15);
        for (int n = 0; n < kPalmAnchors; ++n)
          CHECK(norm(d.row(k, t, kJoints + n) -
                     transpose_mul(fk.orient(t, k), anchors.at(t, n) - fk.position(t, k))) < 1e-15);
      }
  }

  TEST_CASE("ASM ignores where the hand is") {
    Rng rng(44);
    const HandSkeleton skel = random_skeleton(rng);
    const MotionSequence m = random_motion(rng, 2);
    const SemanticMatrix a = extract_asm(m, skel);
    const SemanticMatrix b = extract_asm(m, skel, {random_rotation(rng).to_matrix(), {1.0, -3.0, 2.0}});
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(std::abs(a.data()[i] - b.data()[i]) < 1e-9);
  }

  TEST_CASE("different poses differ in a fingertip row") {
    Rng rng(45);
    const HandSkeleton skel = random_skeleton(rng);
    const SemanticMatrix a = extract_asm(random_motion(rng, 1), skel);
    const SemanticMatrix b = extract_asm(random_motion(rng, 1), skel);
    double diff = 0.0;
    for (int k = 0; k < kJoints; ++k)
      for (int f = 0; f < kFingers; ++f) diff = std::max(diff, norm(a.row(k, 0, joint_index(f, 3)) - b.row(k, 0, joint_index(f, 3))));
    CHECK(diff > 1e-3);
  }

  TEST_CASE("semantic matrix validation") {
    CHECK_THROWS_WITH_AS(SemanticMatrix(0), "empty sequence", InputError);
    CHECK_THROWS_AS(SemanticMatrix(1, std::vector<double>(10)), InputError);
  }
}
