#include "cpens/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "cpens/error.hpp"

namespace cpens {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string fingerprint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for fingerprinting: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

std::string current_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_text(const RunManifest& manifest) {
  std::string out;
  out += "# cpens run manifest\n";
  out += "command: " + manifest.command + "\n";
  out += "version: " + manifest.tool_version + "\n";
  out += "timestamp: " + manifest.timestamp + "\n";
  out += "seed: " + std::to_string(manifest.seed) + "\n";
  out += "dataset_fingerprint: " + manifest.dataset_fingerprint + "\n";
  out += "config:\n";
  for (const auto& [key, value] : manifest.config) {
    out += "  " + key + ": " + value + "\n";
  }
  return out;
}

void write_manifest(const RunManifest& manifest, const std::string& output_path) {
  const std::string path = output_path + ".manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << manifest_text(manifest);
}

}  // namespace cpens
