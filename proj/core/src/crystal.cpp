#include <algorithm>
#include <cmath>
#include <numeric>

#include "snb/errors.hpp"
#include "snb/sampling.hpp"

namespace snb {

std::string_view to_string(CrystalKind k) {
    switch (k) {
        case CrystalKind::FixedLattice: return "FixedLattice";
        case CrystalKind::LatticeWithWaves: return "LatticeWithWaves";
        case CrystalKind::TransientIslands: return "TransientIslands";
        case CrystalKind::None: return "None";
    }
    return "?";
}

std::vector<std::uint8_t> crystalline_cells(const LatticeState& state, Boundary boundary) {
    const std::size_t n = state.size();
    double mean = 0.0;
    for (const auto& c : state.cells) mean += c.x;
    mean /= static_cast<double>(n);

    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t r = 0; r < state.rows; ++r) {
        for (std::size_t c = 0; c < state.cols; ++c) {
            if (!(state.at(r, c).x > mean)) continue;
            const auto nb =
                neighbors(r, c, state.rows, state.cols, Neighborhood::EightCell, boundary);
            // Edge cells of a non-wrapping grid lack a full ring and never qualify.
            if (nb.size() != 8) continue;
            const bool ring_low = std::all_of(nb.begin(), nb.end(), [&](std::size_t i) {
                return state.cells[i].x < mean;
            });
            if (ring_low) mask[state.index(r, c)] = 1;
        }
    }
    return mask;
}

std::vector<std::size_t> crystal_clusters(const std::vector<std::uint8_t>& mask,
                                          std::size_t rows, std::size_t cols,
                                          Boundary boundary) {
    const auto R = static_cast<std::int64_t>(rows);
    const auto C = static_cast<std::int64_t>(cols);
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || seen[start]) continue;
        std::size_t size = 0;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            ++size;
            const auto r = static_cast<std::int64_t>(i / cols);
            const auto c = static_cast<std::int64_t>(i % cols);
            for (std::int64_t dr = -2; dr <= 2; ++dr) {
                for (std::int64_t dc = -2; dc <= 2; ++dc) {
                    std::int64_t rr = r + dr;
                    std::int64_t cc = c + dc;
                    if (boundary == Boundary::Toroidal) {
                        rr = (rr + R) % R;
                        cc = (cc + C) % C;
                    } else if (rr < 0 || rr >= R || cc < 0 || cc >= C) {
                        continue;
                    }
                    const auto j = static_cast<std::size_t>(rr * C + cc);
                    if (mask[j] && !seen[j]) {
                        seen[j] = 1;
                        stack.push_back(j);
                    }
                }
            }
        }
        sizes.push_back(size);
    }
    return sizes;
}

CrystalDiagnosis diagnose_crystal(const LatticeState& state, const ModelParams& params,
                                  const CrystalOptions& options) {
    state.validate();
    if (options.probe_iterates == 0) throw DomainError("diagnose_crystal needs probe_iterates > 0");

    LatticeStepper stepper(state.rows, state.cols, params);
    LatticeState s = state;
    std::vector<double> max_change(s.size(), 0.0);

    CrystalDiagnosis d;
    d.probes = options.probe_iterates;
    double density_sum = 0.0;
    for (std::uint64_t p = 0; p < options.probe_iterates; ++p) {
        const LatticeState before = s;
        stepper.advance(s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double dx = std::abs(s.cells[i].x - before.cells[i].x);
            const double dy = std::abs(s.cells[i].y - before.cells[i].y);
            max_change[i] = std::max({max_change[i], dx, dy});
        }
        const auto mask = crystalline_cells(s, params.boundary);
        density_sum += static_cast<double>(std::accumulate(mask.begin(), mask.end(), 0u)) /
                       static_cast<double>(s.size());
        const auto clusters = crystal_clusters(mask, s.rows, s.cols, params.boundary);
        if (std::any_of(clusters.begin(), clusters.end(),
                        [&](std::size_t n) { return n >= options.min_island; })) {
            ++d.island_probes;
        }
    }
    d.crystal_density = density_sum / static_cast<double>(options.probe_iterates);
    d.period1_fraction =
        static_cast<double>(std::count_if(max_change.begin(), max_change.end(),
                                          [&](double v) { return v < options.tolerance; })) /
        static_cast<double>(s.size());

    if (d.period1_fraction == 1.0) {
        d.kind = CrystalKind::FixedLattice;
    } else if (d.crystal_density >= options.global_fraction * 0.25) {
        d.kind = CrystalKind::LatticeWithWaves;
    } else if (d.island_probes > 0) {
        d.kind = CrystalKind::TransientIslands;
    } else {
        d.kind = CrystalKind::None;
    }
    return d;
}

}  // namespace snb
