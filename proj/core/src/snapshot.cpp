#include "snb/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "snb/errors.hpp"

namespace snb {

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(std::begin(bytes), std::end(bytes));
    }
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
        throw FormatError("snapshot: truncated stream");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(std::begin(bytes), std::end(bytes));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const LatticeState& state, const ModelParams& params) {
    out.write("NBSP", 4);
    put_le<std::uint32_t>(out, kSnapshotVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.rows));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.cols));
    put_le<std::uint64_t>(out, state.generation);
    put_le<double>(out, params.lambda);
    put_le<double>(out, params.mu_x);
    put_le<double>(out, params.mu_y);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(params.neighborhood));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(params.boundary));
    for (const auto& c : state.cells) {
        put_le<double>(out, c.x);
        put_le<double>(out, c.y);
    }
    if (!out) throw FormatError("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const LatticeState& state,
                    const ModelParams& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("snapshot: cannot open " + path.string() + " for writing");
    write_snapshot(out, state, params);
}

Snapshot read_snapshot(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "NBSP", 4) != 0) {
        throw FormatError("snapshot: bad magic");
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kSnapshotVersion) {
        throw FormatError("snapshot: unsupported version " + std::to_string(version));
    }
    Snapshot snap;
    const auto rows = get_le<std::uint32_t>(in);
    const auto cols = get_le<std::uint32_t>(in);
    snap.state = LatticeState(rows, cols);
    snap.state.generation = get_le<std::uint64_t>(in);
    snap.params.lambda = get_le<double>(in);
    snap.params.mu_x = get_le<double>(in);
    snap.params.mu_y = get_le<double>(in);
    const auto nb = get_le<std::uint8_t>(in);
    const auto bd = get_le<std::uint8_t>(in);
    if (nb != 4 && nb != 8) throw FormatError("snapshot: bad neighborhood byte");
    if (bd > 2) throw FormatError("snapshot: bad boundary byte");
    snap.params.neighborhood = static_cast<Neighborhood>(nb);
    snap.params.boundary = static_cast<Boundary>(bd);
    for (auto& c : snap.state.cells) {
        c.x = get_le<double>(in);
        c.y = get_le<double>(in);
    }
    return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("snapshot: cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace snb
