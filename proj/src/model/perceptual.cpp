#include "model/perceptual.hpp"

#include "core/archive.hpp"
#include "core/rng.hpp"
#include "nn/blocks.hpp"

namespace edgegan {

PerceptualExtractor PerceptualExtractor::random(uint64_t seed, const std::vector<int>& channels) {
  PerceptualExtractor e;
  e.channels_ = channels;
  Rng rng(seed);
  int in_c = 3;
  for (int out_c : channels) {
    e.weights_.push_back(conv_init(out_c, in_c, 3, rng));
    e.biases_.push_back(Tensor({out_c}));
    in_c = out_c;
  }
  return e;
}

PerceptualExtractor PerceptualExtractor::from_file(const std::string& path) {
  Archive a = Archive::load(path);
  PerceptualExtractor e;
  for (int i = 0;; ++i) {
    const std::string w = "layer" + std::to_string(i) + ".w";
    const std::string b = "layer" + std::to_string(i) + ".b";
    auto wit = a.tensors.find(w);
    if (wit == a.tensors.end()) break;
    e.weights_.push_back(wit->second);
    e.biases_.push_back(a.tensors.at(b));
    e.channels_.push_back(wit->second.dim(0));
  }
  if (e.weights_.empty())
    throw std::runtime_error("perceptual: no layers found in weights file " + path);
  return e;
}

PerceptualExtractor PerceptualExtractor::from_config(const Config& cfg) {
  const std::string path = cfg.get_str("loss.perceptual.weights_path", "");
  if (!path.empty()) return from_file(path);
  return random(static_cast<uint64_t>(cfg.get_int("loss.perceptual.random_seed", 1234)));
}

std::vector<int> PerceptualExtractor::taps(Tape& tape, int image) const {
  std::vector<int> out{image};
  int x = image;
  for (size_t i = 0; i < weights_.size(); ++i) {
    int w = tape.leaf(weights_[i]);
    int b = tape.leaf(biases_[i]);
    x = tape.leaky_relu(tape.conv2d(x, w, b, 2), 0.2);
    out.push_back(x);
  }
  return out;
}

Eigen::VectorXd PerceptualExtractor::pooled_feature(const Tensor& image) const {
  Tape tape(false);
  int node = tape.leaf(image);
  int last = taps(tape, node).back();
  int pooled = tape.global_avg_pool(last);
  const Tensor& v = tape.value(pooled);
  return Eigen::Map<const Eigen::VectorXd>(v.data.data(), v.size());
}

}  // namespace edgegan
