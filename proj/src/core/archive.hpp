#pragma once

#include "core/tensor.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace edgegan {

/// Single-file tensor archive: magic, JSON header (names, shapes, offsets,
/// metadata, payload hash), then the raw float64 payload. Loading verifies
/// the hash and fails atomically — no partial state escapes.
struct Archive {
  std::map<std::string, Tensor> tensors;
  nlohmann::json metadata;

  void save(const std::string& path) const;
  static Archive load(const std::string& path);
};

uint64_t fnv1a(const void* data, size_t len);

}  // namespace edgegan
