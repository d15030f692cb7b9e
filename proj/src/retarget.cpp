#include "handsem/retarget.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <random>
#include <string>

#include "handsem/error.hpp"
#include "handsem/evaluation.hpp"
#include "handsem/semantics.hpp"

namespace handsem {

namespace {

std::vector<Quatd> initial_rotations(const MotionSequence& q_a_tbs, const RetargetConfig& config) {
  std::vector<Quatd> x;
  switch (config.init) {
    case InitKind::tbs_copy:
      x = q_a_tbs.rotations();
      break;
    case InitKind::rest:
      x.assign(q_a_tbs.rotations().size(), Quatd::identity());
      break;
    case InitKind::given:
      x = config.init_motion->rotations();
      break;
  }
  if (config.init_jitter > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Quatd& q : x) {
      const Vec3d axis{normal(rng), normal(rng), normal(rng)};
      const double angle = config.init_jitter * normal(rng);
      if (norm(axis) > 0.0) q = quat::normalize(q * quat::from_axis_angle(axis, angle));
    }
  }
  return x;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void take_step(const std::vector<Quatd>& x, const std::vector<double>& grad, double alpha, std::vector<Quatd>& out) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double* g = grad.data() + 4 * i;
    out[i] = quat::normalize({x[i].w - alpha * g[0], x[i].x - alpha * g[1], x[i].y - alpha * g[2],
                              x[i].z - alpha * g[3]});
  }
}

}  // namespace

std::string_view init_kind_name(InitKind k) {
  switch (k) {
    case InitKind::tbs_copy:
      return "tbs_copy";
    case InitKind::rest:
      return "rest";
    case InitKind::given:
      return "given";
  }
  return "tbs_copy";
}

InitKind init_kind_from_name(std::string_view name) {
  if (name == "tbs_copy") return InitKind::tbs_copy;
  if (name == "rest") return InitKind::rest;
  if (name == "given") return InitKind::given;
  throw InputError("unknown init '" + std::string(name) + "' (expected tbs_copy, rest or given)");
}

void RetargetConfig::validate() const {
  if (max_iters < 1) throw InputError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (!(step_size > 0.0)) throw InputError("step_size must be positive");
  if (weights.sem < 0.0 || weights.ana < 0.0) throw InputError("loss weights must be nonnegative");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InputError("armijo_c must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InputError("shrink must lie in (0, 1)");
  if (!(grow >= 1.0)) throw InputError("grow must be at least 1");
  if (init_jitter < 0.0) throw InputError("init_jitter must be nonnegative");
  if (init == InitKind::given) {
    if (!init_motion) throw InputError("init 'given' needs an initial motion");
    if (init_motion->convention() != Convention::tbs_local) throw InputError("initial motion must be tbs_local");
  }
}

MotionSequence copy_baseline(const MotionSequence& q_a_global) {
  if (q_a_global.convention() != Convention::global) throw InputError("copy baseline expects a global motion");
  return q_a_global;
}

MotionSequence tbs_copy_baseline(const MotionSequence& q_a_tbs) {
  if (q_a_tbs.convention() != Convention::tbs_local) throw InputError("TBS copy expects a tbs_local motion");
  return q_a_tbs;
}

MotionSequence copy_retarget_tbs(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                 const HandSkeleton& target) {
  // Identical rest frames make the conversion an exact identity.
  if (source.rest_tbs() == target.rest_tbs()) return tbs_copy_baseline(q_a_tbs);
  return global_to_tbs(copy_baseline(tbs_to_global(q_a_tbs, source)), target);
}

RetargetReport retarget_optimize(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                 const HandSkeleton& target, const RetargetConfig& config) {
  config.validate();
  if (q_a_tbs.convention() != Convention::tbs_local) throw InputError("retargeting expects a tbs_local source");
  if (config.init == InitKind::given && config.init_motion->frames() != q_a_tbs.frames())
    throw InputError("initial motion length differs from the source");

  const SemanticMatrix d_a = extract_asm(q_a_tbs, source);
  const RetargetObjective objective(d_a, target, config.weights);

  std::vector<Quatd> x = initial_rotations(q_a_tbs, config);
  std::vector<double> grad(x.size() * 4);
  std::vector<Quatd> trial;
  double f = objective.value_and_gradient(x, grad);
  if (!std::isfinite(f)) throw NumericalError("non-finite loss at iteration 0");

  RetargetReport report{MotionSequence(q_a_tbs.frames(), x, Convention::tbs_local, q_a_tbs.fps()), {f}, {}, 0, 0, 0,
                        false};
  double alpha = config.step_size;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    const double g2 = squared_norm(grad);
    if (std::sqrt(g2) < config.tol) {
      report.converged = true;
      break;
    }
    bool accepted = false;
    double f_trial = f;
    for (int b = 0; b < config.max_backtracks; ++b) {
      take_step(x, grad, alpha, trial);
      f_trial = objective.value(trial);
      if (!std::isfinite(f_trial))
        throw NumericalError("non-finite loss at iteration " + std::to_string(iter + 1));
      if (f_trial <= f - config.armijo_c * alpha * g2) {
        accepted = true;
        break;
      }
      alpha *= config.shrink;
    }
    if (!accepted) {
      // No representable descent step left: numerically stationary.
      spdlog::debug("line search exhausted at iteration {}", iter);
      report.converged = true;
      break;
    }
    x.swap(trial);
    f = objective.value_and_gradient(x, grad);
    if (!std::isfinite(f)) throw NumericalError("non-finite loss at iteration " + std::to_string(iter + 1));
    report.loss_trace.push_back(f);
    alpha *= config.grow;
  }
  report.iterations = iter;
  report.motion = MotionSequence(q_a_tbs.frames(), x, Convention::tbs_local, q_a_tbs.fps());
  report.final_loss = objective.breakdown(x);
  const SemanticMatrix d_b = extract_asm(report.motion, target);
  report.s_palm = s_palm(d_a, d_b);
  report.s_finger = s_finger(d_a, d_b);
  return report;
}

WindowedResult retarget_sequence_windows(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                         const HandSkeleton& target, const RetargetConfig& config,
                                         const WindowOptions& opts) {
  if (opts.window < 1) throw InputError("window must be at least 1 frame");
  if (opts.overlap < 0 || opts.overlap >= opts.window) throw InputError("overlap must lie in [0, window)");
  const int frames = q_a_tbs.frames();
  if (frames <= opts.window) {
    RetargetReport r = retarget_optimize(q_a_tbs, source, target, config);
    MotionSequence m = r.motion;
    return {std::move(m), {std::move(r)}};
  }

  std::vector<int> starts{0};
  const int stride = opts.window - opts.overlap;
  while (starts.back() + opts.window < frames) starts.push_back(std::min(starts.back() + stride, frames - opts.window));

  std::vector<Quatd> out(static_cast<std::size_t>(frames) * kActuated);
  WindowedResult result{q_a_tbs, {}};
  int covered = 0;  // frames [0, covered) hold stitched output
  for (int start : starts) {
    const MotionSequence src = q_a_tbs.slice(start, opts.window);
    RetargetConfig cfg = config;
    if (covered > 0) {
      std::vector<Quatd> init(static_cast<std::size_t>(opts.window) * kActuated);
      for (int i = 0; i < opts.window; ++i) {
        const int from = std::min(start + i, covered - 1);
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(from) * kActuated, kActuated,
                    init.begin() + static_cast<std::ptrdiff_t>(i) * kActuated);
      }
      cfg.init = InitKind::given;
      cfg.init_motion = MotionSequence(opts.window, std::move(init), Convention::tbs_local, q_a_tbs.fps());
      cfg.init_jitter = 0.0;
    }
    RetargetReport r = retarget_optimize(src, source, target, cfg);
    const int overlap_end = covered;
    for (int i = 0; i < opts.window; ++i) {
      const int t = start + i;
      for (int a = 0; a < kActuated; ++a) {
        const Quatd& fresh = r.motion.at(i, a);
        Quatd& slot = out[static_cast<std::size_t>(t) * kActuated + a];
        if (t < overlap_end) {
          const double w = static_cast<double>(t - start + 1) / (overlap_end - start + 1);
          slot = quat::slerp(slot, fresh, w);
        } else {
          slot = fresh;
        }
      }
    }
    covered = start + opts.window;
    result.windows.push_back(std::move(r));
  }
  result.motion = MotionSequence(frames, std::move(out), Convention::tbs_local, q_a_tbs.fps());
  return result;
}

}  // namespace handsem
