#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace bwalk {

/// git describe of the build, or "unknown".
std::string_view version_string();

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t x);

/// Provenance line written at the top of every stochastic artifact:
/// "# schema=<schema>/<v> seed=<seed> version=<git> config=<hash>".
struct ArtifactHeader {
  std::string schema;
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::string config_hash;
};

std::string header_line(const ArtifactHeader& h);

/// Write `content` to `path`, creating parent directories. Throws
/// std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace bwalk
