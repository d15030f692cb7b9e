#pragma once

#include <optional>
#include <string>
#include <vector>

#include "handsem/hand_model.hpp"
#include "handsem/semantics.hpp"

namespace handsem {

struct MetricsReport {
  double s_palm = 0.0;
  double s_finger = 0.0;
  std::optional<double> mse;  // m^2, only with paired ground truth
  int frames = 0;
  std::vector<double> s_palm_per_frame;
  std::vector<double> s_finger_per_frame;
};

// Mean cosine over joints x palm rows x frames. Throws InputError on a zero
// palm row.
double s_palm(const SemanticMatrix& d_a, const SemanticMatrix& d_b);
// Mean cosine over joints x inter-finger rows x frames, normalized by
// 20 x 20 x T; self rows count as 1. Throws InputError on a zero non-self row.
double s_finger(const SemanticMatrix& d_a, const SemanticMatrix& d_b);

// Mean squared joint-position distance over frames and all 20 joints.
double positional_mse(const PoseFK& ground_truth, const PoseFK& predicted);

MetricsReport evaluate_metrics(const SemanticMatrix& d_a, const SemanticMatrix& d_b,
                               const PoseFK* ground_truth = nullptr, const PoseFK* predicted = nullptr);

// Fields s_palm, s_finger, mse_m2 (when present) and frames.
std::string report_to_json(const MetricsReport& report);
// Header line "s_palm,s_finger,mse_m2,frames" and one value line; mse_m2 is
// empty when absent.
std::string report_to_csv(const MetricsReport& report);

}  // namespace handsem
