#include "bwalk/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#ifndef BWALK_VERSION
#define BWALK_VERSION "unknown"
#endif

namespace bwalk {

std::string_view version_string() { return BWALK_VERSION; }

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[i] = digits[x & 15];
  return s;
}

std::string header_line(const ArtifactHeader& h) {
  return "# schema=" + h.schema + "/" + std::to_string(h.schema_version) +
         " seed=" + std::to_string(h.seed) + " version=" + std::string(version_string()) +
         " config=" + h.config_hash + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace bwalk
