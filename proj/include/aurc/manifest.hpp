#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace aurc {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Provenance record written next to every artifact a command produces.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::string> input_digests;  // path -> sha256 hex
  std::optional<std::uint64_t> seed;
  std::string tool_version{kToolVersion};
  // UTC ISO-8601. Taken from SOURCE_DATE_EPOCH when set.
  std::string timestamp;

  void add_input(const std::filesystem::path& path);
  std::string to_json() const;
};

std::string sha256_hex(const std::filesystem::path& path);
std::string sha256_hex_bytes(std::string_view bytes);

std::string utc_timestamp();

/// Writes `<artifact>.manifest.json`.
void write_manifest_for(const std::filesystem::path& artifact, const RunManifest& manifest);

}  // namespace aurc
