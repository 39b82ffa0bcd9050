#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cpens {

// Provenance record written next to every CLI output file. Re-running the
// tool with the configuration a manifest records reproduces the output
// byte for byte (the manifest itself carries the timestamp, the output
// does not).
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // resolved flags, in order
  std::uint64_t seed = 0;
  std::string dataset_fingerprint;
  std::string tool_version;
  std::string timestamp;  // ISO 8601 UTC
};

std::uint64_t fnv1a64(const std::string& bytes);
// "fnv1a64:<16 hex digits>" over the file's bytes.
std::string fingerprint_file(const std::string& path);
std::string current_timestamp_utc();

std::string manifest_text(const RunManifest& manifest);
// Writes `<output_path>.manifest.txt`.
void write_manifest(const RunManifest& manifest, const std::string& output_path);

}  // namespace cpens
