#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace qjump::io {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Identifies one (model, N, k, gamma) cell of a run.
struct CellKey {
    std::string model;
    int n_sites = 0;
    int n_excitations = 0;
    double gamma = 0.0;
    std::string backend;

    bool operator==(const CellKey&) const = default;
};

/// Directory name such as "staggered_N12_k3_g0.5".
std::string cell_directory_name(const CellKey& key);

struct ResultManifest {
    std::string config_hash;  // SHA-256 of the serialized cell configuration
    std::string code_version;
    CellKey cell;
    std::map<std::string, std::string> files;  // file name -> SHA-256
    double wall_clock_seconds = 0.0;
    std::string finished_at;  // UTC, ISO 8601
    long long requested_m = 0;
    long long effective_m = 0;
    long long invalid_m = 0;
    std::uint64_t master_seed = 0;
};

std::string code_version();

void write_manifest(const ResultManifest& manifest, const std::filesystem::path& path);
ResultManifest read_manifest(const std::filesystem::path& path);

/// True when every listed file exists with the recorded checksum.
bool verify_manifest(const ResultManifest& manifest, const std::filesystem::path& directory);

}  // namespace qjump::io
