#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "handsem/error.hpp"
#include "handsem/evaluation.hpp"
#include "handsem/synthetic.hpp"
#include "support.hpp"

using namespace handsem;
using namespace handsem::testing;

TEST_SUITE("evaluation") {
  TEST_CASE("identical matrices score exactly 1") {
    Rng rng(71);
    const SemanticMatrix d = extract_asm(random_motion(rng, 3), random_skeleton(rng));
    CHECK(s_palm(d, d) == 1.0);
    CHECK(s_finger(d, d) == 1.0);
  }

  TEST_CASE("negated palm rows score -1") {
    Rng rng(72);
    const SemanticMatrix d = extract_asm(random_motion(rng, 2), random_skeleton(rng));
    SemanticMatrix e = d;
    for (int j = 0; j < kJoints; ++j)
      for (int t = 0; t < 2; ++t)
        for (int r = kInterRows; r < kAsmRows; ++r) e.set_row(j, t, r, -d.row(j, t, r));
    CHECK(s_palm(d, e) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s_finger(d, e) == 1.0);
  }

  TEST_CASE("orthogonal finger rows leave only the self rows") {
    SemanticMatrix a(1), b(1);
    for (int j = 0; j < kJoints; ++j)
      for (int r = 0; r < kAsmRows; ++r) {
        if (r == j) continue;
        a.set_row(j, 0, r, {1.0, 0.0, 0.0});
        b.set_row(j, 0, r, r < kInterRows ? Vec3d{0.0, 2.0, 0.0} : Vec3d{3.0, 0.0, 0.0});
      }
    CHECK(s_finger(a, b) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(s_palm(a, b) == 1.0);
  }

  TEST_CASE("metrics match the brute-force oracle") {
    Rng rng(73);
    for (int i = 0; i < 5; ++i) {
      const SemanticMatrix a = extract_asm(random_motion(rng, 2), random_skeleton(rng));
      const SemanticMatrix b = extract_asm(random_motion(rng, 2), random_skeleton(rng));
      CHECK(std::abs(s_palm(a, b) - naive_s_palm(a, b)) < 1e-12);
      CHECK(std::abs(s_finger(a, b) - naive_s_finger(a, b)) < 1e-12);
    }
  }

  TEST_CASE("metrics are symmetric and ignore hand scale and placement") {
    Rng rng(77);
    HandSpec spec = HandSpec::defaults();
    spec.seed = 5;
    const HandSkeleton s = make_synthetic_hand(spec).skeleton;
    const HandSkeleton big = make_synthetic_hand(spec.scaled(1.7)).skeleton;
    const HandSkeleton other = random_skeleton(rng);
    const MotionSequence ma = random_motion(rng, 2), mb = random_motion(rng, 2);
    const SemanticMatrix a = extract_asm(ma, s), b = extract_asm(mb, other);
    CHECK(s_palm(a, b) == doctest::Approx(s_palm(b, a)).epsilon(1e-15));
    CHECK(s_finger(a, b) == doctest::Approx(s_finger(b, a)).epsilon(1e-15));
    const SemanticMatrix scaled = extract_asm(ma, big);
    CHECK(s_palm(scaled, b) == doctest::Approx(s_palm(a, b)).epsilon(1e-12));
    CHECK(s_finger(scaled, b) == doctest::Approx(s_finger(a, b)).epsilon(1e-12));
    const SemanticMatrix moved = extract_asm(ma, s, {random_rotation(rng).to_matrix(), {0.3, 0.1, -2.0}});
    CHECK(s_palm(moved, b) == doctest::Approx(s_palm(a, b)).epsilon(1e-12));
  }

  TEST_CASE("zero rows and frame mismatches are rejected") {
    Rng rng(74);
    const SemanticMatrix d = extract_asm(random_motion(rng, 1), random_skeleton(rng));
    SemanticMatrix z = d;
    z.set_row(3, 0, 7, {0, 0, 0});
    CHECK_THROWS_WITH_AS(s_finger(d, z), doctest::Contains("zero semantic row"), InputError);
    z = d;
    z.set_row(3, 0, 22, {0, 0, 0});
    CHECK_THROWS_AS(s_palm(z, d), InputError);
    const SemanticMatrix two = extract_asm(random_motion(rng, 2), random_skeleton(rng));
    CHECK_THROWS_WITH_AS(s_palm(d, two), doctest::Contains("frame count mismatch"), InputError);
  }

  TEST_CASE("positional MSE") {
    Rng rng(75);
    const PoseFK a = fk_of(random_motion(rng, 3), random_skeleton(rng));
    PoseFK b = a;
    for (Vec3d& p : b.positions) p = p + Vec3d{0.0, 0.01, 0.0};
    CHECK(positional_mse(a, b) == doctest::Approx(1e-4).epsilon(1e-10));
    CHECK(positional_mse(a, a) == 0.0);
    const PoseFK c = fk_of(random_motion(rng, 3), random_skeleton(rng));
    CHECK(positional_mse(a, c) == doctest::Approx(naive_positional_mse(a, c)).epsilon(1e-14));
    const PoseFK one = fk_of(random_motion(rng, 1), random_skeleton(rng));
    CHECK_THROWS_AS(positional_mse(a, one), InputError);
  }

  TEST_CASE("report formats agree") {
    Rng rng(76);
    const HandSkeleton sa = random_skeleton(rng), sb = random_skeleton(rng);
    const MotionSequence ma = random_motion(rng, 2), mb = random_motion(rng, 2);
    const PoseFK fa = fk_of(ma, sb), fb = fk_of(mb, sb);
    const MetricsReport r = evaluate_metrics(extract_asm(ma, sa), extract_asm(mb, sb), &fa, &fb);
    CHECK(r.frames == 2);
    CHECK(r.s_palm_per_frame.size() == 2);
    CHECK((r.s_palm_per_frame[0] + r.s_palm_per_frame[1]) / 2.0 == doctest::Approx(r.s_palm).epsilon(1e-15));

    const auto j = nlohmann::json::parse(report_to_json(r));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<std::string>{"frames", "mse_m2", "s_finger", "s_palm"});

    std::istringstream csv(report_to_csv(r));
    std::string header, values;
    std::getline(csv, header);
    std::getline(csv, values);
    CHECK(header == "s_palm,s_finger,mse_m2,frames");
    std::istringstream cells(values);
    std::string cell;
    std::vector<std::string> v;
    while (std::getline(cells, cell, ',')) v.push_back(cell);
    REQUIRE(v.size() == 4);
    CHECK(std::stod(v[0]) == j["s_palm"].get<double>());
    CHECK(std::stod(v[1]) == j["s_finger"].get<double>());
    CHECK(std::stod(v[2]) == j["mse_m2"].get<double>());
    CHECK(std::stoi(v[3]) == 2);

    MetricsReport no_mse = r;
    no_mse.mse.reset();
    CHECK(!nlohmann::json::parse(report_to_json(no_mse)).contains("mse_m2"));
    CHECK(report_to_csv(no_mse).find(",,2\n") != std::string::npos);
  }
}
