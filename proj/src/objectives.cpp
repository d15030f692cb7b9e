#include "handsem/objectives.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "handsem/dual.hpp"
#include "handsem/error.hpp"
#include "handsem/parallel.hpp"

namespace handsem {

namespace {

constexpr std::size_t kParamsPerFrame = 4 * kActuated;
using FrameDual = Dual<kParamsPerFrame>;

void check_same_shape(const SemanticMatrix& a, const SemanticMatrix& b) {
  if (a.frames() != b.frames())
    throw InputError("semantic matrices differ in frame count (" + std::to_string(a.frames()) + " vs " +
                     std::to_string(b.frames()) + ")");
}

}  // namespace

EulerTBS decompose_tbs_euler(const Quatd& q_tbs) {
  const auto e = decompose_tbs_generic(q_tbs.to_matrix());
  return {wrap_angle(e[0]), wrap_angle(e[1]), wrap_angle(e[2])};
}

Quatd compose_tbs_euler(const EulerTBS& e) {
  const Quatd rz = quat::from_axis_angle({0.0, 0.0, 1.0}, e.splay);
  const Quatd ry = quat::from_axis_angle({0.0, 1.0, 0.0}, e.bend);
  const Quatd rx = quat::from_axis_angle({1.0, 0.0, 0.0}, e.twist);
  return quat::normalize(rz * ry * rx);
}

AnatomicalTerms anatomical_terms(const MotionSequence& q_tbs) {
  if (q_tbs.convention() != Convention::tbs_local) throw InputError("anatomical loss expects a tbs_local motion");
  AnatomicalTerms terms;
  for (int t = 0; t < q_tbs.frames(); ++t) anatomical_frame<double>(q_tbs.frame(t), &terms);
  const double inv_t = 1.0 / q_tbs.frames();
  terms.twist *= inv_t;
  terms.splay *= inv_t;
  terms.knuckle_splay *= inv_t;
  terms.bend_over *= inv_t;
  terms.bend_under *= inv_t;
  return terms;
}

double anatomical_loss(const MotionSequence& q_tbs, const HandSkeleton&) { return anatomical_terms(q_tbs).total(); }

std::array<double, kAsmRows> semantic_weights(const SemanticMatrix& d_a, int t, int j) {
  std::array<double, kAsmRows> w;
  std::array<double, kInterRows> dist;
  double dmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kInterRows; ++k) {
    dist[k] = norm(d_a.row(j, t, k));
    dmin = std::min(dmin, dist[k]);
  }
  // Shifting by the minimum distance leaves the softmax unchanged.
  double denom = 0.0;
  for (int k = 0; k < kInterRows; ++k) denom += std::exp(-(dist[k] - dmin));
  for (int k = 0; k < kInterRows; ++k) w[k] = 1.0 + std::exp(-(dist[k] - dmin)) / denom;
  for (int k = kInterRows; k < kAsmRows; ++k) w[k] = 1.0;
  return w;
}

double row_cosine(const Vec3d& a, const Vec3d& b) {
  const double na2 = squared_norm(a);
  const double nb2 = squared_norm(b);
  if (na2 == 0.0 && nb2 == 0.0) return 1.0;
  if (na2 == 0.0 || nb2 == 0.0) {
    spdlog::debug("cosine between a zero and a nonzero semantic row treated as 0");
    return 0.0;
  }
  return dot(a, b) / std::sqrt(na2 * nb2);
}

double semantic_similarity(const SemanticMatrix& d_a, const SemanticMatrix& d_b, bool use_weights) {
  check_same_shape(d_a, d_b);
  double total = 0.0;
  for (int t = 0; t < d_a.frames(); ++t)
    for (int j = 0; j < kJoints; ++j) {
      std::array<double, kAsmRows> w;
      if (use_weights)
        w = semantic_weights(d_a, t, j);
      else
        w.fill(1.0);
      for (int k = 0; k < kAsmRows; ++k) total += w[k] * row_cosine(d_a.row(j, t, k), d_b.row(j, t, k));
    }
  return total / d_a.frames();
}

double quaternion_mse(const MotionSequence& a, const MotionSequence& b) {
  if (a.frames() != b.frames()) throw InputError("quaternion MSE needs equal frame counts");
  double total = 0.0;
  for (std::size_t i = 0; i < a.rotations().size(); ++i) {
    const Quatd& p = a.rotations()[i];
    const Quatd& q = b.rotations()[i];
    const double minus = sq(p.w - q.w) + sq(p.x - q.x) + sq(p.y - q.y) + sq(p.z - q.z);
    const double plus = sq(p.w + q.w) + sq(p.x + q.x) + sq(p.y + q.y) + sq(p.z + q.z);
    total += std::min(minus, plus);
  }
  return total / (4.0 * static_cast<double>(a.rotations().size()));
}

LossBreakdown total_loss(const MotionSequence& q_a_tbs, const MotionSequence& q_b_tbs, const SemanticMatrix& d_a,
                         const SemanticMatrix& d_b, bool same_character, const LossWeights& weights) {
  LossBreakdown out;
  out.mse = same_character ? quaternion_mse(q_a_tbs, q_b_tbs) : 0.0;
  out.sem = semantic_similarity(d_a, d_b);
  out.ana = anatomical_terms(q_b_tbs).total();
  out.total = out.mse - weights.sem * out.sem + weights.ana * out.ana;
  return out;
}

RetargetObjective::RetargetObjective(SemanticMatrix source_asm, HandSkeleton target, LossWeights weights,
                                     bool same_character, std::optional<MotionSequence> source_tbs)
    : source_asm_(std::move(source_asm)),
      target_(std::move(target)),
      weights_(weights),
      same_character_(same_character),
      source_tbs_(std::move(source_tbs)) {
  if (weights_.sem < 0.0 || weights_.ana < 0.0) throw InputError("loss weights must be nonnegative");
  if (same_character_) {
    if (!source_tbs_) throw InputError("self-reconstruction term needs the source rotations");
    if (source_tbs_->frames() != frames()) throw InputError("source rotations and source ASM differ in length");
    if (source_tbs_->convention() != Convention::tbs_local)
      throw InputError("self-reconstruction term expects tbs_local source rotations");
  }
  omega_.resize(static_cast<std::size_t>(frames()) * kJoints * kAsmRows);
  for (int t = 0; t < frames(); ++t)
    for (int j = 0; j < kJoints; ++j) {
      const auto w = semantic_weights(source_asm_, t, j);
      std::copy(w.begin(), w.end(), omega_.begin() + (static_cast<std::ptrdiff_t>(t) * kJoints + j) * kAsmRows);
    }
}

// The semantic cosine uses a.(M^T d) = (M a).d and |M^T d| = |d| for the
// rotation M, so each pair distance is shared by rows (j, k) and (k, j).
template <class S>
S RetargetObjective::frame_terms(int t, std::span<const Quat<S>, kActuated> q_raw, LossBreakdown* parts) const {
  using std::sqrt;
  std::array<Quat<S>, kActuated> q_unit;
  std::array<Quat<S>, kActuated> q_global;
  for (int a = 0; a < kActuated; ++a) {
    q_unit[a] = normalized_generic(q_raw[a]);
    q_global[a] = tbs_local_to_global(q_unit[a], target_.rest_tbs_quat(a));
  }
  const FramePose<S> pose = pose_frame<S>(target_, std::span<const Quat<S>, kActuated>(q_global));
  const auto anchors = palm_anchor_frame(pose, Vec3d{});

  std::array<Vec3<S>, kAsmRows * kJoints> diff;  // target - joint, indexed [j * 29 + k]
  std::array<S, kAsmRows * kJoints> dist;
  for (int j = 0; j < kJoints; ++j)
    for (int k = 0; k < kAsmRows; ++k) {
      const int idx = j * kAsmRows + k;
      if (k < kInterRows && k < j) {
        diff[idx] = -diff[k * kAsmRows + j];
        dist[idx] = dist[k * kAsmRows + j];
        continue;
      }
      const Vec3<S>& target = k < kInterRows ? pose.position[k] : anchors[k - kInterRows];
      diff[idx] = target - pose.position[j];
      dist[idx] = k == j ? S(0.0) : sqrt(squared_norm(diff[idx]));
    }

  S sem(0.0);
  const double* omega = omega_.data() + static_cast<std::size_t>(t) * kJoints * kAsmRows;
  for (int j = 0; j < kJoints; ++j) {
    const Mat3<S>& frame = pose.tbs[j];
    for (int k = 0; k < kAsmRows; ++k) {
      const double w = omega[j * kAsmRows + k];
      if (k == j) {
        sem += w;
        continue;
      }
      const Vec3d a = source_asm_.row(j, t, k);
      const double na = norm(a);
      const S& nd = dist[j * kAsmRows + k];
      if (na == 0.0 || value_of(nd) == 0.0) {
        if (na == 0.0 && value_of(nd) == 0.0) sem += w;
        continue;
      }
      const Vec3<S> ma = frame * a;
      sem += (w / na) * (dot(ma, diff[j * kAsmRows + k]) / nd);
    }
  }

  const S ana = anatomical_frame<S>(std::span<const Quat<S>, kActuated>(q_unit));

  S mse(0.0);
  if (same_character_) {
    for (int a = 0; a < kActuated; ++a) {
      const Quatd& p = source_tbs_->at(t, a);
      const Quat<S>& q = q_unit[a];
      const S minus = sq(q.w - p.w) + sq(q.x - p.x) + sq(q.y - p.y) + sq(q.z - p.z);
      const S plus = sq(q.w + p.w) + sq(q.x + p.x) + sq(q.y + p.y) + sq(q.z + p.z);
      mse += (value_of(plus) < value_of(minus) ? plus : minus);
    }
    mse *= 1.0 / (4.0 * kActuated);
  }

  const double inv_t = 1.0 / frames();
  if (parts) {
    parts->mse += value_of(mse) * inv_t;
    parts->sem += value_of(sem) * inv_t;
    parts->ana += value_of(ana) * inv_t;
  }
  return (mse - weights_.sem * sem + weights_.ana * ana) * inv_t;
}

template double RetargetObjective::frame_terms<double>(int, std::span<const Quatd, kActuated>, LossBreakdown*) const;
template FrameDual RetargetObjective::frame_terms<FrameDual>(int, std::span<const Quat<FrameDual>, kActuated>,
                                                             LossBreakdown*) const;

LossBreakdown RetargetObjective::breakdown(std::span<const Quatd> q_b) const {
  if (q_b.size() != static_cast<std::size_t>(frames()) * kActuated)
    throw InputError("target rotations do not match the source length");
  std::vector<LossBreakdown> per_frame(frames());
  std::vector<double> totals(frames());
  parallel_for(frames(), [&](int t) {
    totals[t] = frame_terms<double>(t, std::span<const Quatd, kActuated>(q_b.data() + t * kActuated, kActuated),
                                    &per_frame[t]);
  });
  LossBreakdown out;
  for (int t = 0; t < frames(); ++t) {
    out.mse += per_frame[t].mse;
    out.sem += per_frame[t].sem;
    out.ana += per_frame[t].ana;
    out.total += totals[t];
  }
  return out;
}

double RetargetObjective::value(std::span<const Quatd> q_b) const { return breakdown(q_b).total; }

double RetargetObjective::value_and_gradient(std::span<const Quatd> q_b, std::span<double> grad) const {
  if (q_b.size() != static_cast<std::size_t>(frames()) * kActuated)
    throw InputError("target rotations do not match the source length");
  if (grad.size() != q_b.size() * 4) throw InputError("gradient buffer must hold T x 15 x 4 values");
  std::vector<double> totals(frames());
  parallel_for(frames(), [&](int t) {
    std::array<Quat<FrameDual>, kActuated> q;
    for (int a = 0; a < kActuated; ++a) {
      const Quatd& src = q_b[static_cast<std::size_t>(t) * kActuated + a];
      q[a] = {FrameDual::variable(src.w, 4 * a), FrameDual::variable(src.x, 4 * a + 1),
              FrameDual::variable(src.y, 4 * a + 2), FrameDual::variable(src.z, 4 * a + 3)};
    }
    const FrameDual f = frame_terms<FrameDual>(t, std::span<const Quat<FrameDual>, kActuated>(q), nullptr);
    totals[t] = f.v;
    std::copy(f.d.begin(), f.d.end(), grad.begin() + static_cast<std::ptrdiff_t>(t) * kParamsPerFrame);
  });
  double total = 0.0;
  for (double v : totals) total += v;
  return total;
}

std::vector<double> loss_gradient(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                  const MotionSequence& q_b_tbs, const HandSkeleton& target, bool same_character,
                                  const LossWeights& weights) {
  if (q_b_tbs.convention() != Convention::tbs_local) throw InputError("loss_gradient expects tbs_local rotations");
  RetargetObjective objective(extract_asm(q_a_tbs, source), target, weights, same_character, q_a_tbs);
  std::vector<double> grad(q_b_tbs.rotations().size() * 4);
  objective.value_and_gradient(q_b_tbs.rotations(), grad);
  return grad;
}

}  // namespace handsem
