#pragma once

// Motion transfer between hand skeletons.
//
// Two baselines copy rotations either in the global rest-aligned frame
// (copy) or in the joints' TBS frames (tbs_copy). The optimizing retargeter
// minimizes -w.sem * L_sem + w.ana * L_ana over the target's TBS-local
// quaternions by gradient descent with Armijo backtracking.

#include <cstdint>
#include <optional>
#include <vector>

#include "handsem/hand_model.hpp"
#include "handsem/objectives.hpp"

namespace handsem {

enum class InitKind { tbs_copy, rest, given };
std::string_view init_kind_name(InitKind k);
InitKind init_kind_from_name(std::string_view name);

struct RetargetConfig {
  int max_iters = 2000;
  double step_size = 1e-3;  // first trial step
  double tol = 1e-6;        // stop when the gradient 2-norm falls below this
  InitKind init = InitKind::tbs_copy;
  std::optional<MotionSequence> init_motion;  // required for InitKind::given, tbs_local
  LossWeights weights;
  std::uint64_t seed = 0;
  double init_jitter = 0.0;  // seeded perturbation (radians) added to the start pose
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grow = 2.0;  // trial step multiplier after an accepted step
  int max_backtracks = 60;

  void validate() const;  // throws InputError
};

struct RetargetReport {
  MotionSequence motion;           // target rotations, tbs_local
  std::vector<double> loss_trace;  // objective at start and after every accepted step
  LossBreakdown final_loss;
  double s_palm = 0.0;
  double s_finger = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Global rotations reused unchanged on the target skeleton.
MotionSequence copy_baseline(const MotionSequence& q_a_global);
// TBS-local rotations reused unchanged in the target's TBS frames.
MotionSequence tbs_copy_baseline(const MotionSequence& q_a_tbs);

// Copy expressed in TBS-local terms: to global with the source rest frames,
// copy, back to TBS-local with the target's.
MotionSequence copy_retarget_tbs(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                 const HandSkeleton& target);

RetargetReport retarget_optimize(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                 const HandSkeleton& target, const RetargetConfig& config);

struct WindowOptions {
  int window = 8;
  int overlap = 2;
};

struct WindowedResult {
  MotionSequence motion;
  std::vector<RetargetReport> windows;
};

// Retargets a long motion in overlapping windows. Each window after the
// first starts from the stitched output for its overlapping frames and from
// the previous window's last frame elsewhere; overlapping frames are blended
// by slerp with a linear ramp.
WindowedResult retarget_sequence_windows(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                         const HandSkeleton& target, const RetargetConfig& config,
                                         const WindowOptions& windows = {});

}  // namespace handsem
