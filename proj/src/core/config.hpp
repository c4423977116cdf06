#pragma once

#include <map>
#include <string>
#include <utility>

namespace edgegan {

/// Flat key=value configuration. Lines starting with '#' are comments.
/// Keys are dotted paths, e.g. `model.C`, `data.canny.sigma`.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_str(const std::string& key, const std::string& def) const;
  int get_int(const std::string& key, int def) const;
  double get_real(const std::string& key, double def) const;
  bool get_bool(const std::string& key, bool def) const;
  /// "HxW" pair, e.g. "64x64".
  std::pair<int, int> get_size(const std::string& key, std::pair<int, int> def) const;

  /// Applies an override of the form "key=value".
  void apply_override(const std::string& assignment);

  const std::map<std::string, std::string>& entries() const { return kv_; }
  std::string to_string() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace edgegan
