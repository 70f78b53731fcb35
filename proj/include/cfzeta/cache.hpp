#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cfzeta/sums.hpp"

namespace cfzeta {

// Binary cache of abscissa tables keyed by (kind, N, p, q). A table file
// carries an FNV-1a content hash; anything that fails validation is
// treated as a miss and rebuilt, never trusted.
namespace table_cache {

inline constexpr char kMagic[4] = {'C', 'F', 'Z', 'T'};
inline constexpr std::uint32_t kVersion = 1;

inline std::uint64_t fnv1a(const unsigned char* data, std::size_t len,
                           std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string file_name(const SumSpec& spec) {
  std::string s = "table-";
  s += to_string(spec.kind);
  s += "-N" + std::to_string(spec.n);
  if (spec.kind == SumKind::kPermuted) {
    s += "-p" + std::to_string(spec.p) + "-q" + std::to_string(spec.q);
  }
  s += ".bin";
  return s;
}

namespace detail {

template <typename T>
void put(std::string& buf, const T& v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.append(p, sizeof(T));
}

template <typename T>
bool get(const std::string& buf, std::size_t& off, T& v) {
  if (off + sizeof(T) > buf.size()) return false;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return true;
}

}  // namespace detail

inline void save(const std::filesystem::path& dir, const SumTable& table) {
  namespace fs = std::filesystem;
  const SumSpec& spec = table.spec();
  if (spec.kind == SumKind::kPartialZeta) return;  // cheap to rebuild
  fs::create_directories(dir);
  std::string buf;
  buf.append(kMagic, 4);
  detail::put(buf, kVersion);
  detail::put(buf, std::uint32_t(spec.kind));
  detail::put(buf, std::uint64_t(spec.n));
  detail::put(buf, std::uint32_t(spec.p));
  detail::put(buf, std::uint32_t(spec.q));
  detail::put(buf, std::uint64_t(table.weights().size()));
  buf.append(reinterpret_cast<const char*>(table.weights().data()),
             table.weights().size() * sizeof(double));
  buf.append(reinterpret_cast<const char*>(table.log_abscissas().data()),
             table.log_abscissas().size() * sizeof(double));
  const std::uint64_t hash =
      fnv1a(reinterpret_cast<const unsigned char*>(buf.data()), buf.size());
  detail::put(buf, hash);

  const fs::path final_path = dir / file_name(spec);
  const fs::path tmp_path = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cache: cannot write " + tmp_path.string());
    out.write(buf.data(), std::streamsize(buf.size()));
  }
  fs::rename(tmp_path, final_path);
}

inline std::optional<SumTable> load(const std::filesystem::path& dir,
                                    const SumSpec& spec) {
  namespace fs = std::filesystem;
  if (spec.kind == SumKind::kPartialZeta) return std::nullopt;
  const fs::path path = dir / file_name(spec);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 4 + sizeof(std::uint32_t)) return std::nullopt;
  if (std::memcmp(buf.data(), kMagic, 4) != 0) return std::nullopt;
  if (buf.size() < sizeof(std::uint64_t)) return std::nullopt;
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored_hash = 0;
  std::memcpy(&stored_hash, buf.data() + body, sizeof(stored_hash));
  if (fnv1a(reinterpret_cast<const unsigned char*>(buf.data()), body) !=
      stored_hash) {
    return std::nullopt;
  }
  std::size_t off = 4;
  std::uint32_t version = 0, kind = 0, p = 0, q = 0;
  std::uint64_t n = 0, count = 0;
  if (!detail::get(buf, off, version) || version != kVersion) return std::nullopt;
  if (!detail::get(buf, off, kind)) return std::nullopt;
  if (!detail::get(buf, off, n)) return std::nullopt;
  if (!detail::get(buf, off, p)) return std::nullopt;
  if (!detail::get(buf, off, q)) return std::nullopt;
  if (!detail::get(buf, off, count)) return std::nullopt;
  if (kind != std::uint32_t(spec.kind) || n != spec.n) return std::nullopt;
  if (spec.kind == SumKind::kPermuted && (p != spec.p || q != spec.q)) {
    return std::nullopt;
  }
  if (count != spec.n) return std::nullopt;
  const std::size_t need = off + 2 * count * sizeof(double) + sizeof(std::uint64_t);
  if (buf.size() != need) return std::nullopt;
  std::vector<double> weights(count), logs(count);
  std::memcpy(weights.data(), buf.data() + off, count * sizeof(double));
  off += count * sizeof(double);
  std::memcpy(logs.data(), buf.data() + off, count * sizeof(double));
  return SumTable::from_arrays(spec, std::move(weights), std::move(logs));
}

/// Load or build (and store) a table. A corrupt cache entry is silently
/// rebuilt; the cache is advisory.
inline SumTable get_or_build(const std::filesystem::path& dir,
                             const SumSpec& spec, ThreadPool* pool = nullptr) {
  if (auto hit = load(dir, spec)) return std::move(*hit);
  SumTable t = SumTable::build(spec, pool);
  save(dir, t);
  return t;
}

}  // namespace table_cache
}  // namespace cfzeta
