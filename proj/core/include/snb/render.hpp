#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "snb/lattice.hpp"

namespace snb {

/// x drives a purple ramp, y a gray level; the pixel is their channel-wise
/// maximum. Both are normalized to [0, 1] between per-frame percentiles.
struct RenderSpec {
    double low_percentile = 2.0;
    double high_percentile = 98.0;

    void validate() const;
};

struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    friend bool operator==(const Image&, const Image&) = default;
};

/// Linear-interpolated percentile (0..100) of the values.
double percentile(std::vector<double> values, double p);

/// One pixel per cell. A frame whose percentile bounds coincide maps every
/// cell to the bottom of both ramps.
Image render(const LatticeState& state, const RenderSpec& spec = {});

/// Binary portable pixmap (P6, maxval 255).
void write_ppm(std::ostream& out, const Image& image);
void write_ppm(const std::filesystem::path& path, const Image& image);

}  // namespace snb
