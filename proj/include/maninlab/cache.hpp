#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace maninlab {

inline constexpr const char* kCodeVersion = "0.3.0";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Content-addressed artifact store. Entries carry a checksum header; a
// corrupted or truncated entry reads as a miss and is removed. Stores go
// through a temporary file and an atomic rename, so concurrent readers see
// either the old entry or the new one.
class ArtifactCache {
 public:
  ArtifactCache(std::filesystem::path dir, std::uint64_t quota_bytes);

  /// $MANINLAB_CACHE, else the configured directory, else ~/.cache/maninlab.
  static std::filesystem::path resolve_dir(const std::string& configured);

  /// Key of (code version, material).
  static std::string key(std::string_view material);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& value) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path entry_path(const std::string& key) const;

 private:
  void evict(const std::filesystem::path& keep) const;

  std::filesystem::path dir_;
  std::uint64_t quota_;
};

}  // namespace maninlab
