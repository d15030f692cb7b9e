// handsem command-line tool: frame annotation, retargeting, evaluation,
// ASM extraction and synthetic fixtures.
//
// Exit codes: 0 success, 1 usage, 2 input or parse error, 3 numerical
// failure. Log verbosity comes from HANDSEM_LOG (trace, debug, info, warn,
// error, off; default warn).

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "handsem/error.hpp"
#include "handsem/evaluation.hpp"
#include "handsem/io.hpp"
#include "handsem/parallel.hpp"
#include "handsem/retarget.hpp"
#include "handsem/semantics.hpp"
#include "handsem/synthetic.hpp"
#include "handsem/tbs_frames.hpp"

namespace fs = std::filesystem;
using namespace handsem;

namespace {

struct Preset {
  std::string_view name;
  int frames;
};
constexpr Preset kPresets[] = {{"default", 8}, {"short", 2}, {"long", 32}};

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("handsem");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^[%l]%$ %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("HANDSEM_LOG")) {
    level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      level = spdlog::level::warn;
      spdlog::warn("unknown HANDSEM_LOG value '{}'", env);
    }
  }
  spdlog::set_level(level);
}

HandSkeleton load_skeleton(const fs::path& path, bool require_rest_tbs = true) {
  SkeletonParseOptions opts;
  opts.require_rest_tbs = require_rest_tbs;
  return skeleton_from_json(read_text_file(path), path.string(), opts);
}

MotionSequence load_motion(const fs::path& path) { return motion_from_json(read_text_file(path), path.string()); }

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return run_config_from_json(read_text_file(path), path);
}

MotionSequence as_tbs(const MotionSequence& m, const HandSkeleton& skel) {
  return m.convention() == Convention::tbs_local ? m : global_to_tbs(m, skel);
}

std::string render_report(const MetricsReport& report, const fs::path& path) {
  return path.extension() == ".csv" ? report_to_csv(report) : report_to_json(report);
}

// ------------------------------------------------------------- annotate

struct AnnotateArgs {
  std::string skeleton, mesh, config, out;
};

void run_annotate(const AnnotateArgs& a) {
  const HandSkeleton skel = load_skeleton(a.skeleton, false);
  const TriMesh mesh = mesh_from_obj(read_text_file(a.mesh), a.mesh);
  const RunConfig cfg = load_config(a.config);
  const AnnotationResult res = annotate_frames(skel, mesh, cfg.overrides, cfg.annotation_resolution);
  for (int i = 0; i < kActuated; ++i)
    spdlog::info("{}: roll {:.3f} deg, score {:.6f}, {} candidates{}", skel.joint(joint_of_actuated(i)).name,
                 res.joints[i].roll * 180.0 / kPi, res.joints[i].score, res.joints[i].candidates_hit,
                 res.joints[i].overridden ? ", overridden" : "");
  OutputSet out;
  out.add(a.out, skeleton_to_json(skel.with_rest_tbs(res.frames)));
  out.commit();
}

// ------------------------------------------------------------- retarget

struct RetargetArgs {
  std::string source_motion, source_skeleton, target_skeleton, config, method = "optimize", out, report, gt_motion;
};

void run_retarget(const RetargetArgs& a) {
  const HandSkeleton src = load_skeleton(a.source_skeleton);
  const HandSkeleton tgt = load_skeleton(a.target_skeleton);
  const MotionSequence motion = load_motion(a.source_motion);
  const RunConfig cfg = load_config(a.config);
  std::optional<MotionSequence> gt;
  if (!a.gt_motion.empty()) gt = as_tbs(load_motion(a.gt_motion), tgt);

  const MotionSequence q_a = as_tbs(motion, src);
  MotionSequence result = q_a;
  if (a.method == "copy") {
    result = copy_retarget_tbs(q_a, src, tgt);
  } else if (a.method == "tbs_copy") {
    result = tbs_copy_baseline(q_a);
  } else {
    const WindowedResult w = retarget_sequence_windows(q_a, src, tgt, cfg.optimizer, cfg.windows);
    for (std::size_t i = 0; i < w.windows.size(); ++i)
      spdlog::info("window {}: {} iterations, loss {:.8f}, converged {}", i, w.windows[i].iterations,
                   w.windows[i].final_loss.total, w.windows[i].converged);
    result = w.motion;
  }
  if (gt && gt->frames() != result.frames())
    throw InputError("ground-truth motion has " + std::to_string(gt->frames()) + " frames, expected " +
                     std::to_string(result.frames()));

  OutputSet out;
  out.add(a.out, motion_to_json(result));
  if (!a.report.empty()) {
    const SemanticMatrix d_a = extract_asm(q_a, src);
    const SemanticMatrix d_b = extract_asm(result, tgt);
    MetricsReport report;
    if (gt) {
      const PoseFK fk_gt = forward_kinematics(tbs_to_global(*gt, tgt), tgt);
      const PoseFK fk_pred = forward_kinematics(tbs_to_global(result, tgt), tgt);
      report = evaluate_metrics(d_a, d_b, &fk_gt, &fk_pred);
    } else {
      report = evaluate_metrics(d_a, d_b);
    }
    out.add(a.report, render_report(report, a.report));
  }
  out.commit();
}

// ------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string motion_a, skeleton_a, motion_b, skeleton_b, report;
  bool mse = false;
};

void run_evaluate(const EvaluateArgs& a) {
  const HandSkeleton sa = load_skeleton(a.skeleton_a);
  const HandSkeleton sb = load_skeleton(a.skeleton_b);
  const MotionSequence ma = as_tbs(load_motion(a.motion_a), sa);
  const MotionSequence mb = as_tbs(load_motion(a.motion_b), sb);
  if (ma.frames() != mb.frames())
    throw InputError("frame count mismatch (" + std::to_string(ma.frames()) + " vs " + std::to_string(mb.frames()) +
                     ")");
  const SemanticMatrix d_a = extract_asm(ma, sa);
  const SemanticMatrix d_b = extract_asm(mb, sb);
  MetricsReport report;
  if (a.mse) {
    const PoseFK fa = forward_kinematics(tbs_to_global(ma, sa), sa);
    const PoseFK fb = forward_kinematics(tbs_to_global(mb, sb), sb);
    report = evaluate_metrics(d_a, d_b, &fa, &fb);
  } else {
    report = evaluate_metrics(d_a, d_b);
  }
  if (a.report.empty()) {
    std::cout << report_to_json(report);
    return;
  }
  OutputSet out;
  out.add(a.report, render_report(report, a.report));
  out.commit();
}

// ------------------------------------------------------------- extract-asm

struct ExtractArgs {
  std::string motion, skeleton, out;
};

void run_extract(const ExtractArgs& a) {
  const HandSkeleton skel = load_skeleton(a.skeleton);
  const MotionSequence m = as_tbs(load_motion(a.motion), skel);
  OutputSet out;
  out.add(a.out, asm_to_json(extract_asm(m, skel)));
  out.commit();
}

// ------------------------------------------------------------- make-fixture

struct FixtureArgs {
  std::string preset = "default";
  std::uint64_t seed = 1;
  std::string out_dir;
};

void run_make_fixture(const FixtureArgs& a) {
  const Preset* preset = nullptr;
  std::string names;
  for (const Preset& p : kPresets) {
    if (p.name == a.preset) preset = &p;
    names += (names.empty() ? "" : ", ") + std::string(p.name);
  }
  if (!preset) throw UsageError("unknown preset '" + a.preset + "'; available presets: " + names);

  HandSpec spec = HandSpec::defaults();
  spec.seed = a.seed;
  const SyntheticHand hand = make_synthetic_hand(spec);
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create '" + dir.string() + "': " + ec.message());

  OutputSet out;
  out.add(dir / "skeleton.json", skeleton_to_json(hand.skeleton));
  out.add(dir / "hand.obj", mesh_to_obj(hand.mesh));
  for (FixtureMotion m : {FixtureMotion::rest, FixtureMotion::curl, FixtureMotion::pinch, FixtureMotion::sweep}) {
    const MotionSequence motion = make_fixture_motion(m, hand.skeleton, preset->frames);
    out.add(dir / ("motion_" + std::string(fixture_motion_name(m)) + ".json"), motion_to_json(motion));
    if (m == FixtureMotion::pinch)
      spdlog::info("pinch peak thumb-index tip distance {:.6f} m",
                   thumb_index_tip_distance(motion, hand.skeleton, motion.frames() - 1));
  }
  out.commit();
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Anatomy-aware hand motion retargeting"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Upper bound on worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  AnnotateArgs ann;
  auto* annotate = app.add_subcommand("annotate", "Annotate rest TBS frames from a hand mesh");
  annotate->add_option("--skeleton", ann.skeleton, "Skeleton JSON (rest_tbs may be absent)")->required();
  annotate->add_option("--mesh", ann.mesh, "Hand mesh, OBJ with triangles")->required();
  annotate->add_option("--config", ann.config, "Run config JSON (resolution, overrides)");
  annotate->add_option("--out", ann.out, "Output skeleton JSON")->required();

  RetargetArgs ret;
  auto* retarget = app.add_subcommand("retarget", "Retarget a motion to another skeleton");
  retarget->add_option("--source-motion", ret.source_motion)->required();
  retarget->add_option("--source-skeleton", ret.source_skeleton)->required();
  retarget->add_option("--target-skeleton", ret.target_skeleton)->required();
  retarget->add_option("--config", ret.config, "Run config JSON");
  retarget->add_option("--method", ret.method)
      ->check(CLI::IsMember({"copy", "tbs_copy", "optimize"}))
      ->capture_default_str();
  retarget->add_option("--out", ret.out, "Output motion JSON (tbs_local)")->required();
  retarget->add_option("--report", ret.report, "Metrics report (.json or .csv)");
  retarget->add_option("--gt-motion", ret.gt_motion, "Ground-truth target motion for positional MSE");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare two motions through their semantic matrices");
  evaluate->add_option("--motion-a", ev.motion_a)->required();
  evaluate->add_option("--skeleton-a", ev.skeleton_a)->required();
  evaluate->add_option("--motion-b", ev.motion_b)->required();
  evaluate->add_option("--skeleton-b", ev.skeleton_b)->required();
  evaluate->add_option("--report", ev.report, "Report path (.json or .csv); stdout JSON when omitted");
  evaluate->add_flag("--mse", ev.mse, "Also report joint-position MSE, treating A as ground truth");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract-asm", "Write the semantic matrix of a motion");
  extract->add_option("--motion", ex.motion)->required();
  extract->add_option("--skeleton", ex.skeleton)->required();
  extract->add_option("--out", ex.out)->required();

  FixtureArgs fx;
  auto* fixture = app.add_subcommand("make-fixture", "Write a synthetic hand, its mesh and sample motions");
  fixture->add_option("--preset", fx.preset, "default, short or long")->capture_default_str();
  fixture->add_option("--seed", fx.seed)->capture_default_str();
  fixture->add_option("--out-dir", fx.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
  }

  try {
    set_max_threads(threads);
    if (*annotate) run_annotate(ann);
    if (*retarget) run_retarget(ret);
    if (*evaluate) run_evaluate(ev);
    if (*extract) run_extract(ex);
    if (*fixture) run_make_fixture(fx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::input);
  }
  return 0;
}
