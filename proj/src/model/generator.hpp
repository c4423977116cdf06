#pragma once

#include "core/config.hpp"
#include "data/onehot.hpp"
#include "nn/blocks.hpp"

#include <optional>
#include <vector>

namespace edgegan {

struct GeneratorConfig {
  int num_classes = 4;
  int feature_channels = 64;  // C
  int branch_depth = 3;       // n
  int spade_hidden = 128;
  bool use_edge = true;      // edge generator present (E+Gi+Ge)
  bool use_transfer = true;  // attention guided transfer wired (adds +Gt)
  bool use_enhance = true;   // semantic preserving module (adds +Gs)

  static GeneratorConfig from(const Config& cfg);
};

/// Tape node handles for everything one generator pass produces.
struct GenOutputs {
  int deep_feature = -1;             // F, C×H×W
  std::vector<int> edge_stack;       // {F_e^j}, empty when no edge branch
  std::vector<int> image_stack;      // {F_i^j} after refinement
  int edge_map = -1;                 // I_e' (tanh range)
  int intermediate = -1;             // I' (post image-level transfer)
  int final_image = -1;              // I'' when the enhancement module runs, else I'
  int layout = -1;                   // leaf holding S
};

/// Parameter-sharing encoder: a full-resolution feature pyramid — three
/// stride-2 residual blocks down, then mirrored nearest-upsampling with
/// label-conditioned residual blocks back to H×W.
struct Encoder {
  Conv2d stem;
  DownResBlock down1, down2, down3;
  SpadeResBlock up1, up2, up3;

  Encoder() = default;
  Encoder(ParamStore& ps, const GeneratorConfig& g, Rng& init);

  int forward(const Bound& b, int layout_node, const Tensor& layout) const;
};

/// n stride-1 convolutions plus a Tanh output head (edge or image branch).
struct BranchHead {
  std::vector<Conv2d> convs;
  Conv2d out;

  BranchHead() = default;
  BranchHead(ParamStore& ps, const std::string& name, int channels, int depth, Rng& init);
};

/// Semantic preserving module: concat [S, I_e', I', F], project to one
/// channel per class, derive pooled Sigmoid scaling factors, reweight
/// residually, expand back and render the final image.
struct SemanticPreserve {
  Conv2d project;  // (C+N+6) -> N
  Conv2d expand;   // N -> (C+N+6)
  Conv2d render;   // (C+N+6) -> 3

  SemanticPreserve() = default;
  SemanticPreserve(ParamStore& ps, const GeneratorConfig& g, Rng& init);

  struct Out {
    int concat = -1;    // the assembled feature
    int class_feat = -1;
    int gamma = -1;     // scaling factors, length N
    int enhanced = -1;  // same shape as concat
    int image = -1;     // I''
  };
  Out forward(const Bound& b, int layout, int edge_map, int intermediate, int deep_feature) const;
};

class Generator {
 public:
  Generator(ParamStore& ps, const GeneratorConfig& cfg, Rng& init);

  /// Full generator pass on one sample. Rejects layouts whose spatial size
  /// is not divisible by the encoder's downsampling factor (8).
  GenOutputs forward(Tape& tape, const Bound& b, const Tensor& layout) const;

  const GeneratorConfig& config() const { return cfg_; }

 private:
  GeneratorConfig cfg_;
  Encoder encoder_;
  std::optional<BranchHead> edge_head_;
  BranchHead image_head_;
  std::optional<SemanticPreserve> enhance_;
};

}  // namespace edgegan
