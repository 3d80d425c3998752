#pragma once

// Content-addressed result cache. An entry's name is the SHA-256 of
// (operation, canonical arguments); its body carries a checksum of the
// payload, and any entry that fails to parse or verify counts as a miss.
// Writers serialize on an exclusive flock and publish by rename.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>

#include <openssl/evp.h>

#include "json.hpp"

#include "diophlab/errors.hpp"

namespace diophlab::cache {

using Json = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw ResourceError("sha256: digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

/// Exclusive advisory lock on a file, released on destruction.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw ResourceError("cache: cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw ResourceError("cache: cannot lock " + path.string());
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw ResourceError("cache: cannot create directory " + dir_.string());
    }
  }

  /// DIOPHLAB_CACHE when set and nonempty, else `fallback`.
  static std::optional<std::filesystem::path> resolve_dir(const std::optional<std::string>& fallback) {
    if (const char* env = std::getenv("DIOPHLAB_CACHE"); env && *env) return std::filesystem::path(env);
    if (fallback && !fallback->empty()) return std::filesystem::path(*fallback);
    return std::nullopt;
  }

  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

  static std::string key(const std::string& op, const Json& args) {
    return sha256_hex(op + '\n' + args.dump());
  }

  [[nodiscard]] std::filesystem::path entry_path(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
  }

  [[nodiscard]] std::optional<Json> get(const std::string& op, const Json& args) const {
    const std::string k = key(op, args);
    std::ifstream in(entry_path(k));
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    const Json entry = Json::parse(buf.str(), nullptr, false);
    if (entry.is_discarded() || !entry.is_object()) return std::nullopt;
    if (!entry.contains("key") || !entry.contains("payload") || !entry.contains("checksum")) return std::nullopt;
    if (entry["key"] != k) return std::nullopt;
    if (entry["checksum"] != sha256_hex(entry["payload"].dump())) return std::nullopt;
    return entry["payload"];
  }

  void put(const std::string& op, const Json& args, const Json& payload) const {
    const std::string k = key(op, args);
    const auto target = entry_path(k);
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw ResourceError("cache: cannot create " + target.parent_path().string());
    const Json entry = {{"key", k}, {"op", op}, {"args", args}, {"payload", payload},
                        {"checksum", sha256_hex(payload.dump())}};
    FileLock lock(dir_ / ".lock");
    static std::atomic<unsigned long> counter{0};
    const auto tmp = target.parent_path() /
                     (k + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << entry.dump() << '\n';
      out.flush();
      if (!out) throw ResourceError("cache: cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw ResourceError("cache: cannot publish " + target.string());
    }
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace diophlab::cache
