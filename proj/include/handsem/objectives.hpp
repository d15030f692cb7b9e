#pragma once

// Retargeting objectives: weighted-cosine semantic similarity, anatomical
// joint-limit penalties and their combination.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "handsem/dual.hpp"
#include "handsem/hand_model.hpp"
#include "handsem/semantics.hpp"

namespace handsem {

struct LossWeights {
  double sem = 1.0;
  double ana = 0.1;
};

// Euler angles of a TBS-local rotation, R = Rz(splay) Ry(bend) Rx(twist).
struct EulerTBS {
  double twist = 0.0;
  double bend = 0.0;
  double splay = 0.0;
};

// Half-width (radians) of the band around bend = +-pi/2 treated as gimbal
// lock: there twist is set to 0 and the free rotation goes to splay.
inline constexpr double kGimbalBand = 1e-6;
inline constexpr double kKnuckleSplayLimit = kPi / 18.0;

// Every rotation has two Euler triples, (twist, bend, splay) and
// (twist + pi, pi - bend, splay + pi). The one with the smaller
// twist^2 + splay^2 is returned, so over-bent fingers report bend > pi/2
// rather than a half-turn of twist and splay.
template <class S>
std::array<S, 3> decompose_tbs_generic(const Mat3<S>& r) {
  using std::atan2;
  using std::sqrt;
  const S cb = sqrt(r(2, 1) * r(2, 1) + r(2, 2) * r(2, 2));
  if (value_of(cb) < std::sin(kGimbalBand)) {
    return {S(0.0), atan2(-r(2, 0), cb), atan2(-r(0, 1), r(1, 1))};
  }
  std::array<S, 3> a{atan2(r(2, 1), r(2, 2)), atan2(-r(2, 0), cb), atan2(r(1, 0), r(0, 0))};
  std::array<S, 3> b{atan2(-r(2, 1), -r(2, 2)), atan2(-r(2, 0), -cb), atan2(-r(1, 0), -r(0, 0))};
  const double ca = value_of(a[0]) * value_of(a[0]) + value_of(a[2]) * value_of(a[2]);
  const double cbr = value_of(b[0]) * value_of(b[0]) + value_of(b[2]) * value_of(b[2]);
  return cbr < ca ? b : a;
}

EulerTBS decompose_tbs_euler(const Quatd& q_tbs);
Quatd compose_tbs_euler(const EulerTBS& e);

// The five penalty sums of the anatomical loss, already divided by T.
struct AnatomicalTerms {
  double twist = 0.0;
  double splay = 0.0;          // non-knuckle joints
  double knuckle_splay = 0.0;  // MCP splay beyond +-pi/18
  double bend_over = 0.0;      // bend above pi/2
  double bend_under = 0.0;     // bend below 0

  double total() const { return twist + splay + knuckle_splay + bend_over + bend_under; }
};

template <class S>
S sq(const S& x) {
  return x * x;
}

// Anatomical penalty of one frame of unit TBS-local rotations.
template <class S>
S anatomical_frame(std::span<const Quat<S>, kActuated> q_tbs, AnatomicalTerms* terms = nullptr) {
  using std::abs;
  S total(0.0);
  for (int a = 0; a < kActuated; ++a) {
    const auto e = decompose_tbs_generic(q_tbs[a].to_matrix());
    const S& twist = e[0];
    const S& bend = e[1];
    const S& splay = e[2];
    const S t_twist = sq(twist);
    S t_splay(0.0), t_knuckle(0.0), t_over(0.0), t_under(0.0);
    if (!is_knuckle_actuated(a)) {
      t_splay = sq(splay);
    } else if (abs(splay) > kKnuckleSplayLimit) {
      t_knuckle = sq(abs(splay) - kKnuckleSplayLimit);
    }
    if (bend > kPi / 2.0) t_over = sq(bend - kPi / 2.0);
    if (bend < 0.0) t_under = sq(bend);
    total += t_twist + t_splay + t_knuckle + t_over + t_under;
    if (terms) {
      terms->twist += value_of(t_twist);
      terms->splay += value_of(t_splay);
      terms->knuckle_splay += value_of(t_knuckle);
      terms->bend_over += value_of(t_over);
      terms->bend_under += value_of(t_under);
    }
  }
  return total;
}

AnatomicalTerms anatomical_terms(const MotionSequence& q_tbs);
double anatomical_loss(const MotionSequence& q_tbs, const HandSkeleton& skeleton);

// omega_jk for one (frame, joint): 1 + softmax_k(-|D_A[j,t,k]|) over the 20
// inter-finger rows, exactly 1 for the 9 palm rows.
std::array<double, kAsmRows> semantic_weights(const SemanticMatrix& d_a, int t, int j);

// Cosine between two rows. Two zero rows (the self row k = j) give 1, a
// single zero row gives 0.
double row_cosine(const Vec3d& a, const Vec3d& b);

// Weighted (or unweighted) cosine similarity averaged over frames.
double semantic_similarity(const SemanticMatrix& d_a, const SemanticMatrix& d_b, bool use_weights = true);

// Mean squared componentwise quaternion difference, each pair compared in
// the sign that minimizes it.
double quaternion_mse(const MotionSequence& a, const MotionSequence& b);

struct LossBreakdown {
  double mse = 0.0;
  double sem = 0.0;
  double ana = 0.0;
  double total = 0.0;
};

// 1[A=B] * MSE(Q_A, Q_B) - w.sem * L_sem + w.ana * L_ana.
LossBreakdown total_loss(const MotionSequence& q_a_tbs, const MotionSequence& q_b_tbs, const SemanticMatrix& d_a,
                         const SemanticMatrix& d_b, bool same_character, const LossWeights& weights);

// The total loss as a function of raw target quaternions (T x 15, each
// normalized internally) for a fixed source. Gradients are exact
// forward-mode derivatives w.r.t. the 4 raw components of every quaternion.
class RetargetObjective {
 public:
  // `source_tbs` supplies the self-reconstruction term and is only read
  // when same_character is true.
  RetargetObjective(SemanticMatrix source_asm, HandSkeleton target, LossWeights weights, bool same_character = false,
                    std::optional<MotionSequence> source_tbs = std::nullopt);

  int frames() const { return source_asm_.frames(); }
  const HandSkeleton& target() const { return target_; }
  const LossWeights& weights() const { return weights_; }

  double value(std::span<const Quatd> q_b) const;
  LossBreakdown breakdown(std::span<const Quatd> q_b) const;
  // Writes T x 15 x 4 partials into `grad` and returns the loss.
  double value_and_gradient(std::span<const Quatd> q_b, std::span<double> grad) const;

  template <class S>
  S frame_terms(int t, std::span<const Quat<S>, kActuated> q_raw, LossBreakdown* parts) const;

 private:
  SemanticMatrix source_asm_;
  HandSkeleton target_;
  LossWeights weights_;
  bool same_character_;
  std::optional<MotionSequence> source_tbs_;
  std::vector<double> omega_;  // T x 20 x 29
};

// Gradient of total_loss w.r.t. the raw components of q_b_tbs (T x 15 x 4).
std::vector<double> loss_gradient(const MotionSequence& q_a_tbs, const HandSkeleton& source,
                                  const MotionSequence& q_b_tbs, const HandSkeleton& target, bool same_character,
                                  const LossWeights& weights);

}  // namespace handsem
