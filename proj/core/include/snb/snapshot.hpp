#pragma once

#include <filesystem>
#include <iosfwd>

#include "snb/lattice.hpp"

namespace snb {

/// Binary lattice snapshot, all fields little-endian:
///   "NBSP" | version u32 | rows u32 | cols u32 | generation u64 |
///   lambda f64 | mu_x f64 | mu_y f64 | neighborhood u8 | boundary u8 |
///   rows*cols pairs (x f64, y f64) in row-major order.
/// The neighborhood byte holds the neighbor count (4 or 8); the boundary byte
/// is 0 toroidal, 1 reflecting, 2 absorbing.
struct Snapshot {
    LatticeState state;
    ModelParams params;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const LatticeState& state, const ModelParams& params);
void write_snapshot(const std::filesystem::path& path, const LatticeState& state,
                    const ModelParams& params);

/// Throws FormatError on a bad magic, unknown version or truncated payload.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace snb
