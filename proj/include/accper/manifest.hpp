#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

namespace accper {

// Everything needed to reproduce an experiment byte-for-byte, plus checksums
// of what it produced.
struct experiment_manifest {
    std::string experiment_name;
    nlohmann::json config = nlohmann::json::object();  // full parameter record
    std::uint64_t seed = 0;
    std::map<std::string, std::string> artifact_checksums;  // file name -> fnv1a64 hex
    std::string tool_version;
    int schema_version = 0;
};

// FNV-1a 64-bit digest of a file's bytes, as 16 lowercase hex digits.
std::string fnv1a64_file(const std::string& path);
std::string fnv1a64_bytes(const std::string& bytes);

void save_manifest(const std::string& path, const experiment_manifest& m);
experiment_manifest load_manifest(const std::string& path);

}  // namespace accper
