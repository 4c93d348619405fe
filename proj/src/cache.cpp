#include "maninlab/cache.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include <unistd.h>

#include <openssl/evp.h>

#include "maninlab/errors.hpp"

namespace maninlab {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "maninlab-cache-v1";

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::Io, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ArtifactCache::ArtifactCache(fs::path dir, std::uint64_t quota_bytes) : dir_(std::move(dir)), quota_(quota_bytes) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::Io, "cannot create cache directory " + dir_.string() + ": " + ec.message());
}

fs::path ArtifactCache::resolve_dir(const std::string& configured) {
  if (const char* env = std::getenv("MANINLAB_CACHE"); env && *env) return env;
  if (!configured.empty()) return configured;
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "maninlab";
  return fs::temp_directory_path() / "maninlab-cache";
}

std::string ArtifactCache::key(std::string_view material) {
  std::string full = std::string("maninlab ") + kCodeVersion + "\n";
  full += material;
  return sha256_hex(full);
}

fs::path ArtifactCache::entry_path(const std::string& key) const { return dir_ / (key + ".entry"); }

std::optional<std::string> ArtifactCache::lookup(const std::string& key) const {
  const fs::path path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string raw = ss.str();
  // header: magic, payload size, payload digest
  const auto eol = raw.find('\n');
  bool valid = false;
  std::string payload;
  if (eol != std::string::npos) {
    std::istringstream header(raw.substr(0, eol));
    std::string magic, digest;
    std::size_t size = 0;
    if (header >> magic >> size >> digest && magic == kMagic && raw.size() - eol - 1 == size) {
      payload = raw.substr(eol + 1);
      valid = sha256_hex(payload) == digest;
    }
  }
  if (!valid) {
    std::error_code ec;
    fs::remove(path, ec);
    return std::nullopt;
  }
  return payload;
}

void ArtifactCache::store(const std::string& key, const std::string& value) const {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path final_path = entry_path(key);
  std::ostringstream tmp_name;
  tmp_name << "." << key << "." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << "." << counter++ << ".tmp";
  const fs::path tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write cache entry " + tmp.string());
    out << kMagic << ' ' << value.size() << ' ' << sha256_hex(value) << '\n' << value;
    if (!out.flush()) fail(ErrorCode::Io, "cannot write cache entry " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot publish cache entry " + final_path.string());
  }
  evict(final_path);
}

void ArtifactCache::evict(const fs::path& keep) const {
  struct Entry {
    fs::path path;
    fs::file_time_type time;
    std::uintmax_t size;
  };
  std::vector<Entry> entries;
  std::uintmax_t total = 0;
  std::error_code ec;
  for (const auto& de : fs::directory_iterator(dir_, ec)) {
    if (de.path().extension() != ".entry") continue;
    std::error_code e1, e2;
    const auto size = de.file_size(e1);
    const auto time = de.last_write_time(e2);
    if (e1 || e2) continue;
    entries.push_back({de.path(), time, size});
    total += size;
  }
  if (total <= quota_) return;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.time != b.time ? a.time < b.time : a.path < b.path;
  });
  for (const Entry& e : entries) {
    if (total <= quota_) break;
    if (e.path == keep) continue;
    if (fs::remove(e.path, ec)) total -= e.size;
  }
}

}  // namespace maninlab
