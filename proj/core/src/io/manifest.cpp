#include "qjump/io/manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "qjump/error.hpp"
#include "qjump/io/csv.hpp"

#ifndef QJUMP_VERSION
#define QJUMP_VERSION "unknown"
#endif

namespace qjump::io {

namespace {

using json = nlohmann::json;

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
            throw IoError("SHA-256 initialisation failed");
    }
    void update(const void* data, std::size_t size) {
        if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) throw IoError("SHA-256 update failed");
    }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw IoError("SHA-256 finalisation failed");
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i) {
            out += digits[md[i] >> 4];
            out += digits[md[i] & 0xf];
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data.data(), data.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

std::string cell_directory_name(const CellKey& key) {
    return key.model + "_N" + std::to_string(key.n_sites) + "_k" + std::to_string(key.n_excitations) + "_g" +
           to_text(key.gamma);
}

std::string code_version() { return QJUMP_VERSION; }

void write_manifest(const ResultManifest& m, const std::filesystem::path& path) {
    json j;
    j["config_hash"] = m.config_hash;
    j["code_version"] = m.code_version;
    j["cell"] = {{"model", m.cell.model},
                 {"n_sites", m.cell.n_sites},
                 {"n_excitations", m.cell.n_excitations},
                 {"gamma", m.cell.gamma},
                 {"backend", m.cell.backend}};
    j["files"] = m.files;
    j["wall_clock_seconds"] = m.wall_clock_seconds;
    j["finished_at"] = m.finished_at;
    j["requested_m"] = m.requested_m;
    j["effective_m"] = m.effective_m;
    j["invalid_m"] = m.invalid_m;
    j["master_seed"] = m.master_seed;

    const auto tmp = std::filesystem::path(path).concat(".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ResultManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        const json j = json::parse(in);
        ResultManifest m;
        m.config_hash = j.at("config_hash").get<std::string>();
        m.code_version = j.at("code_version").get<std::string>();
        const auto& c = j.at("cell");
        m.cell.model = c.at("model").get<std::string>();
        m.cell.n_sites = c.at("n_sites").get<int>();
        m.cell.n_excitations = c.at("n_excitations").get<int>();
        m.cell.gamma = c.at("gamma").get<double>();
        m.cell.backend = c.at("backend").get<std::string>();
        m.files = j.at("files").get<std::map<std::string, std::string>>();
        m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        m.finished_at = j.at("finished_at").get<std::string>();
        m.requested_m = j.at("requested_m").get<long long>();
        m.effective_m = j.at("effective_m").get<long long>();
        m.invalid_m = j.at("invalid_m").get<long long>();
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        return m;
    } catch (const json::exception& e) {
        throw IoError("malformed manifest " + path.string() + ": " + e.what());
    }
}

bool verify_manifest(const ResultManifest& m, const std::filesystem::path& dir) {
    for (const auto& [name, hash] : m.files) {
        const auto p = dir / name;
        if (!std::filesystem::exists(p) || sha256_file(p) != hash) return false;
    }
    return true;
}

}  // namespace qjump::io
