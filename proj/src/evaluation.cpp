#include "handsem/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <string>

#include "handsem/error.hpp"
#include "handsem/objectives.hpp"

namespace handsem {

namespace {

void check_pair(const SemanticMatrix& a, const SemanticMatrix& b) {
  if (a.frames() != b.frames())
    throw InputError("frame count mismatch (" + std::to_string(a.frames()) + " vs " + std::to_string(b.frames()) +
                     ")");
}

double strict_cosine(const Vec3d& a, const Vec3d& b, int j, int t, int k) {
  const double na2 = squared_norm(a);
  const double nb2 = squared_norm(b);
  if (na2 == 0.0 || nb2 == 0.0)
    throw InputError("zero semantic row at joint " + std::to_string(j) + ", frame " + std::to_string(t) + ", row " +
                     std::to_string(k));
  // sqrt(x * x) == x in IEEE arithmetic, so identical rows give exactly 1.
  return dot(a, b) / std::sqrt(na2 * nb2);
}

double palm_frame(const SemanticMatrix& d_a, const SemanticMatrix& d_b, int t) {
  double sum = 0.0;
  for (int j = 0; j < kJoints; ++j)
    for (int k = kInterRows; k < kAsmRows; ++k) sum += strict_cosine(d_a.row(j, t, k), d_b.row(j, t, k), j, t, k);
  return sum / (kJoints * kPalmAnchors);
}

double finger_frame(const SemanticMatrix& d_a, const SemanticMatrix& d_b, int t) {
  double sum = 0.0;
  for (int j = 0; j < kJoints; ++j)
    for (int k = 0; k < kInterRows; ++k)
      sum += k == j ? 1.0 : strict_cosine(d_a.row(j, t, k), d_b.row(j, t, k), j, t, k);
  return sum / (kJoints * kInterRows);
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double s_palm(const SemanticMatrix& d_a, const SemanticMatrix& d_b) {
  check_pair(d_a, d_b);
  double sum = 0.0;
  for (int t = 0; t < d_a.frames(); ++t) sum += palm_frame(d_a, d_b, t);
  return sum / d_a.frames();
}

double s_finger(const SemanticMatrix& d_a, const SemanticMatrix& d_b) {
  check_pair(d_a, d_b);
  double sum = 0.0;
  for (int t = 0; t < d_a.frames(); ++t) sum += finger_frame(d_a, d_b, t);
  return sum / d_a.frames();
}

double positional_mse(const PoseFK& ground_truth, const PoseFK& predicted) {
  if (ground_truth.frames != predicted.frames)
    throw InputError("frame count mismatch (" + std::to_string(ground_truth.frames) + " vs " +
                     std::to_string(predicted.frames) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < ground_truth.positions.size(); ++i)
    sum += squared_norm(ground_truth.positions[i] - predicted.positions[i]);
  return sum / static_cast<double>(ground_truth.positions.size());
}

MetricsReport evaluate_metrics(const SemanticMatrix& d_a, const SemanticMatrix& d_b, const PoseFK* ground_truth,
                               const PoseFK* predicted) {
  check_pair(d_a, d_b);
  MetricsReport r;
  r.frames = d_a.frames();
  for (int t = 0; t < r.frames; ++t) {
    r.s_palm_per_frame.push_back(palm_frame(d_a, d_b, t));
    r.s_finger_per_frame.push_back(finger_frame(d_a, d_b, t));
  }
  r.s_palm = s_palm(d_a, d_b);
  r.s_finger = s_finger(d_a, d_b);
  if (ground_truth && predicted) r.mse = positional_mse(*ground_truth, *predicted);
  return r;
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["s_palm"] = report.s_palm;
  j["s_finger"] = report.s_finger;
  if (report.mse) j["mse_m2"] = *report.mse;
  j["frames"] = report.frames;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricsReport& report) {
  std::string out = "s_palm,s_finger,mse_m2,frames\n";
  out += shortest(report.s_palm) + "," + shortest(report.s_finger) + "," +
         (report.mse ? shortest(*report.mse) : std::string()) + "," + std::to_string(report.frames) + "\n";
  return out;
}

}  // namespace handsem
