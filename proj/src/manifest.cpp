#include "augmentor/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "augmentor/error.hpp"
#include "augmentor/rng.hpp"

namespace augmentor {

std::string artifact_version() { return "0.1.0"; }

std::string file_digest_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash_string_seed(buf.str())));
    return hex;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::json doc;
    doc["command_line"] = manifest.command_line;
    doc["version"] = manifest.version;
    doc["seeds"] = manifest.seeds;
    doc["inputs"] = manifest.inputs;
    doc["settings"] = manifest.settings;
    doc["timings_ms"] = manifest.timings_ms;
    return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << manifest_json(manifest);
    if (!out) throw DataError("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
        RunManifest m;
        m.command_line = doc.at("command_line").get<std::string>();
        m.version = doc.at("version").get<std::string>();
        m.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        m.inputs = doc.at("inputs").get<std::map<std::string, std::string>>();
        m.settings = doc.at("settings").get<std::map<std::string, std::string>>();
        m.timings_ms = doc.at("timings_ms").get<std::map<std::string, double>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": not a run manifest: " + e.what());
    }
}

} // namespace augmentor
