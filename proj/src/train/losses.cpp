#include "train/losses.hpp"

namespace edgegan {

int expected_log(Tape& tape, const std::vector<int>& scores) {
  require(!scores.empty(), "expected_log: no score maps");
  std::vector<int> terms;
  for (int s : scores) terms.push_back(tape.mean_all(tape.log_clamped(s, kScoreEps)));
  return tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0 / terms.size()));
}

int expected_log_one_minus(Tape& tape, const std::vector<int>& scores) {
  require(!scores.empty(), "expected_log_one_minus: no score maps");
  std::vector<int> terms;
  for (int s : scores)
    terms.push_back(tape.mean_all(tape.log_clamped(tape.rsub_scalar(1.0, s), kScoreEps)));
  return tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0 / terms.size()));
}

std::vector<int> logits_to_scores(Tape& tape, const std::vector<int>& logits) {
  std::vector<int> out;
  out.reserve(logits.size());
  for (int l : logits) out.push_back(tape.sigmoid(l));
  return out;
}

int edge_adv_d_term(Tape& tape, const std::vector<int>& real_scores,
                    const std::vector<int>& fake_scores) {
  return tape.weighted_sum(
      {expected_log(tape, real_scores), expected_log_one_minus(tape, fake_scores)}, {1.0, 1.0});
}

int adv_g_term(Tape& tape, const std::vector<int>& fake_scores) {
  return tape.weighted_sum({expected_log(tape, fake_scores)}, {-1.0});
}

int image_adv_d_term(Tape& tape, const std::vector<int>& real_scores,
                     const std::vector<int>& inter_scores, const std::vector<int>& final_scores,
                     double lambda) {
  require(lambda >= 0, "image_adv_d_term: lambda must be non-negative");
  std::vector<int> terms{expected_log(tape, real_scores),
                         expected_log_one_minus(tape, inter_scores)};
  std::vector<double> ws{lambda + 1.0, 1.0};
  if (!final_scores.empty()) {
    terms.push_back(expected_log_one_minus(tape, final_scores));
    ws.push_back(lambda);
  }
  return tape.weighted_sum(terms, ws);
}

int feature_matching_loss(Tape& tape, const std::vector<int>& real_feats,
                          const std::vector<int>& fake_feats) {
  require(real_feats.size() == fake_feats.size() && !real_feats.empty(),
          "feature_matching_loss: layer count mismatch");
  std::vector<int> terms;
  for (size_t i = 0; i < real_feats.size(); ++i)
    terms.push_back(tape.l1_diff_mean(real_feats[i], fake_feats[i]));
  return tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0 / terms.size()));
}

int perceptual_loss(Tape& tape, const PerceptualExtractor& net, int real, int fake) {
  std::vector<int> rt = net.taps(tape, real);
  std::vector<int> ft = net.taps(tape, fake);
  std::vector<int> terms;
  for (size_t i = 0; i < rt.size(); ++i) terms.push_back(tape.l1_diff_mean(rt[i], ft[i]));
  return tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0 / terms.size()));
}

LossReport total_objective(const LossReport& parts, const LossWeights& w) {
  LossReport r = parts;
  r.total = w.lambda_c * (r.adv_edge + r.adv_image) +
            w.lambda_f * (r.fm_edge + r.fm_inter + w.lambda * r.fm_final) +
            w.lambda_p * (r.perc_edge + r.perc_inter + w.lambda * r.perc_final);
  return r;
}

}  // namespace edgegan
