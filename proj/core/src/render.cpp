#include "snb/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "snb/errors.hpp"

namespace snb {

namespace {

// Purple at full x intensity; green stays low.
constexpr double kPurple[3] = {0.62, 0.10, 0.78};

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;

    double scale(double v) const {
        if (!(hi > lo)) return 0.0;
        return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    }
};

std::uint8_t to_byte(double t) { return static_cast<std::uint8_t>(std::lround(255.0 * t)); }

}  // namespace

void RenderSpec::validate() const {
    if (!(low_percentile >= 0.0 && low_percentile < high_percentile && high_percentile <= 100.0)) {
        throw DomainError("render percentiles must satisfy 0 <= low < high <= 100");
    }
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw DomainError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(k);
    return values[k] + frac * (values[k + 1] - values[k]);
}

Image render(const LatticeState& state, const RenderSpec& spec) {
    spec.validate();
    state.validate();
    std::vector<double> xs(state.size());
    std::vector<double> ys(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        xs[i] = state.cells[i].x;
        ys[i] = state.cells[i].y;
    }
    const Bounds bx{percentile(xs, spec.low_percentile), percentile(xs, spec.high_percentile)};
    const Bounds by{percentile(ys, spec.low_percentile), percentile(ys, spec.high_percentile)};

    Image img;
    img.width = state.cols;
    img.height = state.rows;
    img.rgb.resize(3 * state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double tx = bx.scale(xs[i]);
        const double ty = by.scale(ys[i]);
        for (int ch = 0; ch < 3; ++ch) img.rgb[3 * i + ch] = to_byte(std::max(kPurple[ch] * tx, ty));
    }
    return img;
}

void write_ppm(std::ostream& out, const Image& image) {
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw DomainError("failed to write image");
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open " + path.string() + " for writing");
    write_ppm(out, image);
}

}  // namespace snb
