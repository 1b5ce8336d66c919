#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace augmentor {

std::string artifact_version();

// Provenance sidecar written next to every command's outputs. Rerunning with
// the same inputs and settings reproduces the outputs byte for byte; timings
// are wall-clock and informational only, so comparisons should drop them.
struct RunManifest {
    std::string command_line;
    std::string version = artifact_version();
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> inputs;    // path -> content digest
    std::map<std::string, std::string> settings;  // resolved values, defaults included
    std::map<std::string, double> timings_ms;
};

// 64-bit FNV-1a of the file bytes, as 16 hex digits.
std::string file_digest_hex(const std::filesystem::path& path);

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

} // namespace augmentor
