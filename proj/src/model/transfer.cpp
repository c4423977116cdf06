#include "model/transfer.hpp"

namespace edgegan {
namespace transfer {

int features(Tape& tape, int edge_feature, int image_feature) {
  require(tape.value(edge_feature).same_shape(tape.value(image_feature)),
          "transfer: shape mismatch");
  int gate = tape.sigmoid(edge_feature);
  return tape.add(tape.mul(gate, image_feature), image_feature);
}

int image(Tape& tape, int edge_map, int intermediate) {
  return features(tape, edge_map, intermediate);
}

Tensor features(const Tensor& edge_feature, const Tensor& image_feature) {
  require(edge_feature.same_shape(image_feature), "transfer: shape mismatch");
  Eigen::ArrayXd gate = 1.0 / (1.0 + (-edge_feature.data).exp());
  return Tensor(image_feature.shape, gate * image_feature.data + image_feature.data);
}

Tensor image(const Tensor& edge_map, const Tensor& intermediate) {
  return features(edge_map, intermediate);
}

}  // namespace transfer
}  // namespace edgegan
