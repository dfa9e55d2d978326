#pragma once

// On-disk table cache: irreducible tables (see IrreducibleCache) and curve
// place tables, all under versioned file names "alladiff-v<version>-*".

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elliptic.hpp"
#include "polyring.hpp"

namespace alladiff {

inline std::string cache_prefix() { return "alladiff-v" + std::to_string(kCacheFormatVersion) + "-"; }

inline std::filesystem::path curve_table_file(const std::filesystem::path& dir, std::uint64_t p, std::int64_t a,
                                              std::int64_t b, int n) {
  return dir / (cache_prefix() + "curve-p" + std::to_string(p) + "-a" + std::to_string(a) + "-b" + std::to_string(b) +
                "-n" + std::to_string(n) + ".txt");
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    require(static_cast<bool>(os), "cannot write " + tmp);
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Loads the curve place table from dir, rebuilding it when it is missing or
/// its checksum does not match. Sets *rebuilt_corrupt when a bad file was replaced.
inline PlaceTable cached_curve_table(const std::filesystem::path& dir, std::uint64_t p, std::int64_t a, std::int64_t b,
                                     int n, bool* rebuilt_corrupt = nullptr) {
  const auto path = curve_table_file(dir, p, a, b, n);
  if (rebuilt_corrupt) *rebuilt_corrupt = false;
  if (std::filesystem::exists(path)) {
    const std::string text = detail::read_file(path);
    const auto nl = text.find('\n');
    if (nl != std::string::npos && text.compare(0, 9, "checksum=") == 0) {
      const std::string body = text.substr(nl + 1);
      if (text.substr(9, nl - 9) == detail::hex64(detail::fnv1a(body))) {
        try {
          return PlaceTable::parse(body);
        } catch (const ValidationError&) {
        }
      }
    }
    if (rebuilt_corrupt) *rebuilt_corrupt = true;
  }
  PlaceTable t = curve_place_table(Curve::over_prime(p, a, b), n);
  const std::string body = t.serialize();
  detail::write_atomically(path, "checksum=" + detail::hex64(detail::fnv1a(body)) + "\n" + body);
  return t;
}

struct CacheEntry {
  std::string file;
  std::string key;  // header line
  bool valid = false;
};

/// Versioned cache files in dir, sorted by name, with checksum status.
inline std::vector<CacheEntry> inspect_cache(const std::filesystem::path& dir) {
  std::vector<CacheEntry> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& de : std::filesystem::directory_iterator(dir)) {
    const std::string name = de.path().filename().string();
    if (!de.is_regular_file() || name.rfind(cache_prefix(), 0) != 0 || name.size() < 4 ||
        name.substr(name.size() - 4) != ".txt")
      continue;
    const std::string text = detail::read_file(de.path());
    const auto nl = text.find('\n');
    CacheEntry e{name, text.substr(0, nl), false};
    if (nl != std::string::npos) {
      const std::string body = text.substr(nl + 1);
      const std::string sum = detail::hex64(detail::fnv1a(body));
      if (text.compare(0, 9, "checksum=") == 0) {
        e.valid = text.substr(9, nl - 9) == sum;
        const auto nl2 = body.find('\n', body.find('\n') + 1);
        e.key = body.substr(body.find('\n') + 1, nl2 - body.find('\n') - 1);
      } else {
        e.valid = e.key.find("checksum=" + sum) != std::string::npos;
      }
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) { return a.file < b.file; });
  return out;
}

/// Removes versioned cache files only; returns how many were removed.
inline std::size_t clear_cache(const std::filesystem::path& dir) {
  std::size_t n = 0;
  if (!std::filesystem::exists(dir)) return 0;
  std::vector<std::filesystem::path> victims;
  for (const auto& de : std::filesystem::directory_iterator(dir))
    if (de.is_regular_file() && de.path().filename().string().rfind(cache_prefix(), 0) == 0) victims.push_back(de.path());
  for (const auto& v : victims) n += std::filesystem::remove(v) ? 1 : 0;
  return n;
}

}  // namespace alladiff
