#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "qjump/error.hpp"
#include "qjump/mps.hpp"

namespace qjump {

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'J', 'M', 'P', 'S', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;
// Written natively; a reader on a machine with other byte order sees a
// mismatched marker and refuses the file.
constexpr std::uint32_t kByteOrder = 0x01020304u;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("checkpoint truncated");
    return v;
}

}  // namespace

void save_checkpoint(const MpsState& mps, const std::filesystem::path& path) {
    const auto tmp = std::filesystem::path(path).concat(".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open checkpoint for writing: " + tmp.string());
        out.write(kMagic.data(), kMagic.size());
        put(out, kVersion);
        put(out, kByteOrder);
        put<std::int32_t>(out, mps.n_sites);
        put<std::int32_t>(out, mps.n_excitations);
        put<std::int32_t>(out, mps.ortho_center);
        put<double>(out, mps.trunc_ledger);
        for (const auto& site : mps.tensors) {
            put<std::int64_t>(out, site[0].rows());
            put<std::int64_t>(out, site[0].cols());
            for (const auto& m : site)
                out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(Complex)));
        }
        for (const auto& spec : mps.bond_spectra) {
            put<std::uint64_t>(out, spec.size());
            out.write(reinterpret_cast<const char*>(spec.data()), static_cast<std::streamsize>(spec.size() * sizeof(double)));
        }
        if (!out) throw IoError("failed writing checkpoint: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

MpsState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("not an MPS checkpoint: " + path.string());
    if (get<std::uint32_t>(in) != kVersion) throw IoError("unsupported checkpoint version");
    if (get<std::uint32_t>(in) != kByteOrder) throw IoError("checkpoint byte order does not match this machine");

    MpsState mps;
    mps.n_sites = get<std::int32_t>(in);
    mps.n_excitations = get<std::int32_t>(in);
    mps.ortho_center = get<std::int32_t>(in);
    mps.trunc_ledger = get<double>(in);
    if (mps.n_sites < 2 || mps.n_sites > 62 || mps.ortho_center < 0 || mps.ortho_center >= mps.n_sites)
        throw IoError("corrupt checkpoint header");
    mps.tensors.resize(static_cast<std::size_t>(mps.n_sites));
    for (auto& site : mps.tensors) {
        const auto rows = get<std::int64_t>(in);
        const auto cols = get<std::int64_t>(in);
        if (rows < 1 || cols < 1 || rows > 1 << 16 || cols > 1 << 16) throw IoError("corrupt checkpoint tensor shape");
        for (auto& m : site) {
            m.resize(rows, cols);
            in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(Complex)));
        }
    }
    mps.bond_spectra.resize(static_cast<std::size_t>(mps.n_sites - 1));
    for (auto& spec : mps.bond_spectra) {
        const auto len = get<std::uint64_t>(in);
        if (len > 1u << 16) throw IoError("corrupt checkpoint spectrum");
        spec.resize(len);
        in.read(reinterpret_cast<char*>(spec.data()), static_cast<std::streamsize>(len * sizeof(double)));
    }
    if (!in) throw IoError("checkpoint truncated");
    return mps;
}

}  // namespace qjump
