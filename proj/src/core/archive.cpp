#include "core/archive.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace edgegan {

namespace {
constexpr char kMagic[8] = {'E', 'G', 'T', 'A', 'R', 'C', 'H', '1'};
}

uint64_t fnv1a(const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

void Archive::save(const std::string& path) const {
  nlohmann::json header;
  header["metadata"] = metadata;
  nlohmann::json entries = nlohmann::json::array();
  uint64_t offset = 0;
  std::vector<double> payload;
  for (const auto& [name, t] : tensors) {
    entries.push_back({{"name", name}, {"shape", t.shape}, {"offset", offset}});
    payload.insert(payload.end(), t.data.data(), t.data.data() + t.size());
    offset += static_cast<uint64_t>(t.size());
  }
  header["tensors"] = entries;
  header["payload_count"] = offset;
  header["payload_hash"] = fnv1a(payload.data(), payload.size() * sizeof(double));

  const std::string hs = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("archive: cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint64_t hlen = hs.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw std::runtime_error("archive: write failed for " + path);
}

Archive Archive::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("archive: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("archive: bad magic in " + path);
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (1u << 26))
    throw std::runtime_error("archive: corrupt header length in " + path);
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw std::runtime_error("archive: truncated header in " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(hs);
  } catch (const std::exception& e) {
    throw std::runtime_error("archive: corrupt header json in " + path + ": " + e.what());
  }
  const uint64_t count = header.at("payload_count").get<uint64_t>();
  std::vector<double> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("archive: truncated payload in " + path);
  const uint64_t hash = fnv1a(payload.data(), payload.size() * sizeof(double));
  if (hash != header.at("payload_hash").get<uint64_t>())
    throw std::runtime_error("archive: payload hash mismatch in " + path);

  Archive a;
  a.metadata = header.value("metadata", nlohmann::json::object());
  for (const auto& e : header.at("tensors")) {
    std::vector<int> shape = e.at("shape").get<std::vector<int>>();
    const uint64_t off = e.at("offset").get<uint64_t>();
    Tensor t(shape);
    std::memcpy(t.data.data(), payload.data() + off, static_cast<size_t>(t.size()) * sizeof(double));
    a.tensors.emplace(e.at("name").get<std::string>(), std::move(t));
  }
  return a;
}

}  // namespace edgegan
