// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance <path to handsem CLI> <golden directory> [criterion...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <unistd.h>

#include "handsem/evaluation.hpp"
#include "handsem/io.hpp"
#include "handsem/objectives.hpp"
#include "handsem/retarget.hpp"
#include "handsem/semantics.hpp"
#include "handsem/synthetic.hpp"
#include "handsem/tbs_frames.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace handsem;
using namespace handsem::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- 1

// Angles kept at least 0.05 rad from every anatomical limit so central
// differences never straddle a penalty switch.
double pick_angle(Rng& rng, std::initializer_list<std::pair<double, double>> intervals) {
  std::vector<std::pair<double, double>> iv(intervals);
  const auto& [lo, hi] = iv[std::uniform_int_distribution<std::size_t>(0, iv.size() - 1)(rng)];
  return uniform(rng, lo, hi);
}

std::vector<Quatd> gradient_pose(Rng& rng, int frames) {
  std::vector<Quatd> q;
  for (int i = 0; i < frames * kActuated; ++i) {
    const bool knuckle = is_knuckle_actuated(i % kActuated);
    const double twist = uniform(rng, -0.3, 0.3);
    const double bend = pick_angle(rng, {{-0.3, -0.05}, {0.05, 1.5}, {1.62, 1.9}});
    const double splay = knuckle ? pick_angle(rng, {{-0.4, -0.22}, {-0.12, 0.12}, {0.22, 0.4}})
                                 : uniform(rng, -0.3, 0.3);
    Quatd r = compose_tbs_euler({twist, bend, splay});
    const double scale = uniform(rng, 0.7, 1.4);  // raw, unnormalized parameters
    q.push_back({r.w * scale, r.x * scale, r.y * scale, r.z * scale});
  }
  return q;
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  constexpr int kSamples = 50;
  constexpr double h = 1e-5;
  for (int s = 0; s < kSamples; ++s) {
    const int frames = 1 + s % 3;
    const HandSkeleton source = random_skeleton(rng);
    const bool same = s % 5 == 0;
    const HandSkeleton target = same ? source : random_skeleton(rng);
    const MotionSequence q_a = random_motion(rng, frames);
    const RetargetObjective objective(extract_asm(q_a, source), target, LossWeights{}, same,
                                      same ? std::optional<MotionSequence>(q_a) : std::nullopt);
    std::vector<Quatd> q = gradient_pose(rng, frames);
    std::vector<double> grad(q.size() * 4);
    objective.value_and_gradient(q, grad);

    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (int c = 0; c < 4; ++c) {
        double* comp = c == 0 ? &q[i].w : c == 1 ? &q[i].x : c == 2 ? &q[i].y : &q[i].z;
        const double keep = *comp;
        *comp = keep + h;
        const double fp = objective.value(q);
        *comp = keep - h;
        const double fm = objective.value(q);
        *comp = keep;
        const double fd = (fp - fm) / (2.0 * h);
        err = std::max(err, std::abs(grad[4 * i + c] - fd));
        scale = std::max(scale, std::abs(fd));
      }
    }
    worst = std::max(worst, err / scale);
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-4 && elapsed < 60.0,
          "max relative error " + fmt(worst) + " over " + std::to_string(kSamples) + " samples (< 1e-4), " +
              fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------- 2

Outcome self_retargeting() {
  const auto start = Clock::now();
  const SyntheticHand hand = make_synthetic_hand(HandSpec::defaults());
  const MotionSequence curl = make_fixture_motion(FixtureMotion::curl, hand.skeleton, 8);
  RetargetConfig cfg;
  cfg.init = InitKind::rest;
  cfg.max_iters = 2000;
  const RetargetReport r = retarget_optimize(curl, hand.skeleton, hand.skeleton, cfg);
  const double err = mean_joint_error(fk_of(curl, hand.skeleton), fk_of(r.motion, hand.skeleton));
  const double rel = err / hand_length(hand.skeleton);
  const double elapsed = seconds_since(start);
  const bool pass = r.s_palm >= 0.99 && r.s_finger >= 0.99 && rel < 0.01 && r.iterations <= 2000 && elapsed < 120.0;
  return {pass, "s_palm " + fmt(r.s_palm) + ", s_finger " + fmt(r.s_finger) + ", joint error " + fmt(100.0 * rel) +
                    "% of hand length, " + std::to_string(r.iterations) + " iterations, " + fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------- 3

Outcome baseline_ordering() {
  const SyntheticHand src = make_synthetic_hand(HandSpec::defaults());
  bool pass = true;
  std::string detail;
  for (FixtureMotion kind : {FixtureMotion::pinch, FixtureMotion::curl}) {
    const MotionSequence q_a = make_fixture_motion(kind, src.skeleton, 8);
    const SemanticMatrix d_a = extract_asm(q_a, src.skeleton);
    for (double scale : {0.7, 1.3}) {
      const HandSkeleton tgt = make_synthetic_hand(HandSpec::defaults().with_finger_length_scale(scale)).skeleton;
      auto metrics = [&](const MotionSequence& q_b) {
        const SemanticMatrix d_b = extract_asm(q_b, tgt);
        return std::pair{s_palm(d_a, d_b), s_finger(d_a, d_b)};
      };
      const auto copy = metrics(copy_retarget_tbs(q_a, src.skeleton, tgt));
      const auto tbs = metrics(tbs_copy_baseline(q_a));
      const auto opt = metrics(retarget_optimize(q_a, src.skeleton, tgt, RetargetConfig{}).motion);
      bool ok = opt.first >= tbs.first && tbs.first >= copy.first && opt.second >= tbs.second &&
                tbs.second >= copy.second;
      // tbs_copy leaves under 0.005 of s_palm headroom here, so the strict
      // margin applies to s_finger.
      if (kind == FixtureMotion::pinch) ok = ok && opt.second - tbs.second > 0.005;
      pass = pass && ok;
      detail += std::string(detail.empty() ? "" : "; ") + std::string(fixture_motion_name(kind)) + " x" + fmt(scale) +
                " palm " + fmt(copy.first) + "/" + fmt(tbs.first) + "/" + fmt(opt.first) + " finger " +
                fmt(copy.second) + "/" + fmt(tbs.second) + "/" + fmt(opt.second);
    }
  }
  return {pass, "copy/tbs_copy/optimize: " + detail};
}

// ---------------------------------------------------------------- 4

Outcome rigid_invariance() {
  Rng rng(4);
  const HandSkeleton skel = random_skeleton(rng);
  const MotionSequence m = random_motion(rng, 4);
  const SemanticMatrix base = extract_asm(m, skel);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    RigidTransform w;
    w.rotation = random_rotation(rng).to_matrix();
    w.translation = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    const SemanticMatrix moved = extract_asm(m, skel, w);
    for (std::size_t k = 0; k < base.data().size(); ++k)
      worst = std::max(worst, std::abs(base.data()[k] - moved.data()[k]));
  }
  return {worst < 1e-9, "max ASM change " + fmt(worst) + " over 100 transforms (< 1e-9)"};
}

// ---------------------------------------------------------------- 5

Outcome weight_normalization() {
  Rng rng(5);
  double worst = 0.0;
  bool palm_exact = true;
  for (int s = 0; s < 10; ++s) {
    const int frames = 3;
    SemanticMatrix d(frames);
    // Mix of realistic and arbitrary rows, including very large norms.
    const double spread = s < 5 ? 0.1 : 50.0;
    for (double& v : d.data()) v = uniform(rng, -spread, spread);
    if (s == 0) d = extract_asm(random_motion(rng, frames), random_skeleton(rng));
    for (int t = 0; t < frames; ++t)
      for (int j = 0; j < kJoints; ++j) {
        const auto w = semantic_weights(d, t, j);
        double sum = 0.0;
        for (int k = 0; k < kInterRows; ++k) sum += w[k];
        worst = std::max(worst, std::abs(sum - 21.0));
        for (int k = kInterRows; k < kAsmRows; ++k) palm_exact = palm_exact && w[k] == 1.0;
      }
  }
  return {worst < 1e-9 && palm_exact,
          "max |sum - 21| " + fmt(worst) + " (< 1e-9), palm weights exactly 1: " + (palm_exact ? "yes" : "no")};
}

// ---------------------------------------------------------------- 6

Outcome anatomical_contract() {
  const SyntheticHand hand = make_synthetic_hand(HandSpec::defaults());
  double in_range = 0.0;
  for (FixtureMotion m : {FixtureMotion::rest, FixtureMotion::curl, FixtureMotion::pinch, FixtureMotion::sweep})
    in_range = std::max(in_range, anatomical_loss(make_fixture_motion(m, hand.skeleton, 8), hand.skeleton));

  // One joint violates one limit; every other joint sits in range.
  const double delta = 0.1;
  struct Case {
    const char* name;
    int joint;
    std::function<EulerTBS(double)> pose;
    double AnatomicalTerms::*term;
  };
  const Case cases[] = {
      {"twist", 4, [](double d) { return EulerTBS{d, 0.5, 0.0}; }, &AnatomicalTerms::twist},
      {"splay", 7, [](double d) { return EulerTBS{0.0, 0.5, d}; }, &AnatomicalTerms::splay},
      {"knuckle splay", 6, [](double d) { return EulerTBS{0.0, 0.5, kKnuckleSplayLimit + d}; },
       &AnatomicalTerms::knuckle_splay},
      {"bend over", 10, [](double d) { return EulerTBS{0.0, kPi / 2.0 + d, 0.0}; }, &AnatomicalTerms::bend_over},
      {"bend under", 13, [](double d) { return EulerTBS{0.0, -d, 0.0}; }, &AnatomicalTerms::bend_under},
  };
  double worst = 0.0;
  bool isolated = true;
  for (const Case& c : cases) {
    double contribution[2];
    for (int i = 0; i < 2; ++i) {
      std::vector<Quatd> q;
      for (int t = 0; t < 2; ++t)
        for (int a = 0; a < kActuated; ++a)
          q.push_back(a == c.joint ? compose_tbs_euler(c.pose((i + 1) * delta)) : compose_tbs_euler({0.0, 0.4, 0.0}));
      const AnatomicalTerms terms = anatomical_terms(MotionSequence(2, q, Convention::tbs_local));
      contribution[i] = terms.*c.term;
      isolated = isolated && terms.total() == contribution[i] && contribution[i] > 0.0;
    }
    worst = std::max(worst, std::abs(contribution[1] / contribution[0] - 4.0) / 4.0);
  }
  // Twist recovered from a composed quaternion carries roundoff near 1e-17
  // rad, so "zero" means below (1e-12 rad)^2.
  return {in_range < 1e-24 && isolated && worst < 1e-9,
          "in-range fixtures L_ana " + fmt(in_range) + ", quadrupling error " + fmt(worst) +
              " (< 1e-9), each term isolated: " + (isolated ? "yes" : "no")};
}

// ---------------------------------------------------------------- 7

Outcome annotation_recovery() {
  const SyntheticHand hand = make_synthetic_hand(HandSpec::defaults());
  const AnnotationResult res = annotate_frames(hand.skeleton, hand.mesh);
  double worst = 0.0;
  for (int a = 0; a < kActuated; ++a)
    worst = std::max(worst, rotation_angle_between(res.frames[a], hand.skeleton.rest_tbs(a)));
  const double step = kDefaultAnnotationResolution;

  // Sweep the cylinder with the library loss and with the closed form; both
  // minima must sit on the sweep sample nearest the true minor axis.
  const double minor = 0.006, major = 0.009, phi = 0.4;
  const TriMesh cyl = elliptic_cylinder(minor, major, phi);
  const Vec3d twist{1.0, 0.0, 0.0}, back{0.0, 0.0, 1.0};
  const Vec3d e_min{0.0, -std::sin(phi), std::cos(phi)};
  const Vec3d e_maj = cross(e_min, twist);
  double lib_best = 1e300, ana_best = 1e300, lib_roll = 0.0, ana_roll = 0.0, gap = 0.0, best_axis_angle = 1e300,
         nearest_roll = 0.0;
  for (int i = 0; i < 360; ++i) {
    const double roll = i * step;
    FrameCandidate c = candidate_at_roll(twist, back, roll);
    if (!(dot(c.n_splay, back) > 0.0)) continue;
    const double lib = annotation_loss(c, cyl, Vec3d{});
    const double psi = std::atan2(dot(c.n_splay, e_maj), dot(c.n_splay, e_min));
    const double ana = ellipse_loss(psi, minor, major);
    gap = std::max(gap, std::abs(lib - ana));
    if (lib < lib_best - 1e-12) lib_best = lib, lib_roll = roll;
    if (ana < ana_best - 1e-12) ana_best = ana, ana_roll = roll;
    if (std::abs(psi) < best_axis_angle) best_axis_angle = std::abs(psi), nearest_roll = roll;
  }
  const bool oracle = lib_roll == ana_roll && ana_roll == nearest_roll && gap < 1e-4;
  return {worst <= step + 1e-9 && oracle,
          "max frame error " + fmt(worst * 180.0 / kPi) + " deg (<= 1 deg); cylinder minimum at roll " +
              fmt(lib_roll * 180.0 / kPi) + " deg, closed form " + fmt(ana_roll * 180.0 / kPi) + " deg, minor axis " +
              fmt(phi * 180.0 / kPi) + " deg, max loss gap " + fmt(gap)};
}

// ---------------------------------------------------------------- 8

Outcome euler_round_trip() {
  Rng rng(8);
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const Quatd q = random_rotation(rng);
    const EulerTBS e = decompose_tbs_euler(q);
    if (std::abs(std::abs(e.bend) - kPi / 2.0) < kGimbalBand) continue;
    ++checked;
    const Mat3d back = compose_tbs_euler(e).to_matrix();
    const Mat3d ref = q.to_matrix();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(back(r, c) - ref(r, c)));
  }
  // Inside the band twist is 0 and the remaining rotation goes to splay.
  bool degenerate_ok = true;
  double band_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double sign = i % 2 ? 1.0 : -1.0;
    const double bend = sign * (kPi / 2.0 - uniform(rng, 0.0, 0.5 * kGimbalBand) * (i % 4 < 2 ? 0.0 : 1.0));
    const double twist = uniform(rng, -kPi, kPi), splay = uniform(rng, -kPi, kPi);
    const Quatd q = compose_tbs_euler({twist, bend, splay});
    const EulerTBS e = decompose_tbs_euler(q);
    degenerate_ok = degenerate_ok && e.twist == 0.0 && std::abs(std::abs(e.bend) - kPi / 2.0) < kGimbalBand;
    const Mat3d back = compose_tbs_euler(e).to_matrix();
    const Mat3d ref = q.to_matrix();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) band_worst = std::max(band_worst, std::abs(back(r, c) - ref(r, c)));
  }
  degenerate_ok = degenerate_ok && band_worst < 1e-5;
  return {worst < 1e-9 && degenerate_ok && checked > 9990,
          "max recomposition error " + fmt(worst) + " over " + std::to_string(checked) +
              " rotations (< 1e-9); gimbal band twist = 0 and error " + fmt(band_worst) + ": " +
              (degenerate_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------- 9

Outcome metric_oracles() {
  Rng rng(9);
  double worst = 0.0;
  bool self_exact = true;
  for (int s = 0; s < 20; ++s) {
    const int frames = 1 + s % 4;
    const HandSkeleton sa = random_skeleton(rng), sb = random_skeleton(rng);
    const MotionSequence ma = random_motion(rng, frames), mb = random_motion(rng, frames);
    const SemanticMatrix da = extract_asm(ma, sa), db = extract_asm(mb, sb);
    const PoseFK fa = fk_of(ma, sa), fb = fk_of(mb, sb);
    worst = std::max(worst, std::abs(s_palm(da, db) - naive_s_palm(da, db)));
    worst = std::max(worst, std::abs(s_finger(da, db) - naive_s_finger(da, db)));
    worst = std::max(worst, std::abs(positional_mse(fa, fb) - naive_positional_mse(fa, fb)));
    self_exact = self_exact && s_palm(da, da) == 1.0 && s_finger(da, da) == 1.0;
  }
  return {worst < 1e-12 && self_exact, "max deviation from triple-loop reference " + fmt(worst) +
                                           " (< 1e-12), s(D,D) exactly 1: " + (self_exact ? "yes" : "no")};
}

// ---------------------------------------------------------------- 10

std::string slurp(const fs::path& p) { return read_text_file(p); }

Outcome io_stability(const fs::path& cli, const fs::path& golden) {
  Rng rng(10);
  bool ok = true;
  std::string detail;
  for (int s = 0; s < 10; ++s) {
    const HandSkeleton skel = random_skeleton(rng);
    const std::string sj = skeleton_to_json(skel);
    const HandSkeleton skel2 = skeleton_from_json(sj);
    ok = ok && skel2 == skel && skeleton_to_json(skel2) == sj;

    const MotionSequence m = random_motion(rng, 3);
    const MotionSequence m2 = motion_from_json(motion_to_json(m));
    for (int t = 0; t < m.frames(); ++t)
      for (int a = 0; a < kActuated; ++a) {
        const Quatd x = quat::canonical(m.at(t, a)), y = m2.at(t, a);
        ok = ok && x.w == y.w && x.x == y.x && x.y == y.y && x.z == y.z;
      }
    const SemanticMatrix d = extract_asm(m, skel);
    ok = ok && asm_from_json(asm_to_json(d)).data() == d.data();
  }
  detail = std::string("round trips value-exact: ") + (ok ? "yes" : "no");

  const fs::path dir = fs::temp_directory_path() / ("handsem_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](const fs::path& out) {
    const std::string cmd = "\"" + cli.string() + "\" extract-asm --motion \"" + (golden / "motion_rest.json").string() +
                            "\" --skeleton \"" + (golden / "skeleton.json").string() + "\" --out \"" + out.string() +
                            "\"";
    return std::system(cmd.c_str());
  };
  const int rc1 = run(dir / "a.json"), rc2 = run(dir / "b.json");
  bool cli_ok = rc1 == 0 && rc2 == 0;
  if (cli_ok) {
    const std::string a = slurp(dir / "a.json"), b = slurp(dir / "b.json");
    const std::string ref = slurp(golden / "asm_rest.json");
    cli_ok = a == b && a == ref;
  }
  fs::remove_all(dir);
  detail += std::string(", extract-asm repeatable and equal to golden: ") + (cli_ok ? "yes" : "no");
  return {ok && cli_ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <handsem cli> <golden dir> [criterion...]\n";
    return 2;
  }
  const fs::path cli = argv[1], golden = argv[2];
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 gradient correctness", gradient_correctness},
      {"2 self-retargeting recovery", self_retargeting},
      {"3 baseline ordering", baseline_ordering},
      {"4 ASM rigid invariance", rigid_invariance},
      {"5 weight normalization", weight_normalization},
      {"6 anatomical loss contract", anatomical_contract},
      {"7 frame annotation recovery", annotation_recovery},
      {"8 Euler round-trip", euler_round_trip},
      {"9 metric oracles", metric_oracles},
      {"10 I/O stability", [&] { return io_stability(cli, golden); }},
  };
  // Optional trailing arguments select criteria by number.
  std::set<int> only;
  for (int i = 3; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    if (++number, !only.empty() && !only.count(number)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << "criterion " << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
