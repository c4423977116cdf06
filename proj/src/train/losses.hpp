#pragma once

#include "core/tape.hpp"
#include "model/perceptual.hpp"

#include <vector>

namespace edgegan {

struct LossWeights {
  double lambda_c = 1.0;
  double lambda_f = 10.0;
  double lambda_p = 10.0;
  double lambda = 2.0;
};

/// Named scalar loss terms plus the weighted total the generator minimizes.
/// Invariant (held bit-exactly by total_objective):
///   total = lambda_c*(adv_edge+adv_image)
///         + lambda_f*(fm_edge + fm_inter + lambda*fm_final)
///         + lambda_p*(perc_edge + perc_inter + lambda*perc_final)
struct LossReport {
  double adv_edge = 0, adv_image = 0;
  double fm_edge = 0, fm_inter = 0, fm_final = 0;
  double perc_edge = 0, perc_inter = 0, perc_final = 0;
  double total = 0;
};

constexpr double kScoreEps = 1e-7;

/// E[log D]: mean over patches per scale, averaged over scales, with the
/// score clamped inside (eps, 1-eps). `scores` are probability maps.
int expected_log(Tape& tape, const std::vector<int>& scores);
/// E[log(1 - D)] under the same conventions.
int expected_log_one_minus(Tape& tape, const std::vector<int>& scores);

/// Squashes patch logits to probabilities.
std::vector<int> logits_to_scores(Tape& tape, const std::vector<int>& logits);

/// Discriminator objective of the edge modality:
///   E[log D(S,I_e)] + E[log(1-D(S,I_e'))].
int edge_adv_d_term(Tape& tape, const std::vector<int>& real_scores,
                    const std::vector<int>& fake_scores);

/// Non-saturating generator counterpart for one fake: -E[log D(S,fake)].
int adv_g_term(Tape& tape, const std::vector<int>& fake_scores);

/// Discriminator objective of the image modality:
///   (lambda+1)E[log D(S,I)] + E[log(1-D(S,I'))] + lambda E[log(1-D(S,I''))].
/// Pass an empty final_scores list to drop the I'' term (ablations).
int image_adv_d_term(Tape& tape, const std::vector<int>& real_scores,
                     const std::vector<int>& inter_scores, const std::vector<int>& final_scores,
                     double lambda);

/// Mean absolute difference per feature layer, averaged over layers. The
/// real features must be detached by the caller so no gradient reaches D.
int feature_matching_loss(Tape& tape, const std::vector<int>& real_feats,
                          const std::vector<int>& fake_feats);

/// Mean absolute difference across the extractor's taps, averaged over taps.
int perceptual_loss(Tape& tape, const PerceptualExtractor& net, int real, int fake);

/// Assembles the Eq-structured weighted sum from already computed terms.
LossReport total_objective(const LossReport& parts, const LossWeights& w);

}  // namespace edgegan
