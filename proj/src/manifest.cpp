#include "accper/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "accper/version.hpp"

namespace accper {

std::string fnv1a64_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return fnv1a64_bytes(ss.str());
}

void save_manifest(const std::string& path, const experiment_manifest& m) {
    nlohmann::json j;  // std::map-backed: keys serialize sorted
    j["experiment_name"] = m.experiment_name;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["artifact_checksums"] = m.artifact_checksums;
    j["tool_version"] = m.tool_version.empty() ? std::string(tool_version) : m.tool_version;
    j["schema_version"] = m.schema_version > 0 ? m.schema_version : manifest_schema_version;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_manifest: cannot open " + path);
    os << j.dump(2) << '\n';
    os.flush();
    if (!os) throw std::runtime_error("save_manifest: write failure on " + path);
}

experiment_manifest load_manifest(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_manifest: cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_manifest: " + path + ": " + e.what());
    }
    experiment_manifest m;
    try {
        m.experiment_name = j.at("experiment_name").get<std::string>();
        m.config = j.at("config");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.schema_version = j.at("schema_version").get<int>();
        if (j.contains("artifact_checksums"))
            m.artifact_checksums =
                j.at("artifact_checksums").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_manifest: " + path + ": " + e.what());
    }
    if (m.schema_version != manifest_schema_version)
        throw std::runtime_error("load_manifest: " + path + ": schema version " +
                                 std::to_string(m.schema_version) + " unsupported (expected " +
                                 std::to_string(manifest_schema_version) + ")");
    return m;
}

}  // namespace accper
