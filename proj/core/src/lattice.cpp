#include "snb/lattice.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "snb/errors.hpp"
#include "snb/parallel.hpp"

namespace snb {

namespace {

struct Offset {
    int dr;
    int dc;
};

constexpr std::array<Offset, 8> kEightOffsets{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<Offset, 4> kFourOffsets{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

template <class Visit>
void for_each_neighbor(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols,
                       Neighborhood nb, Boundary boundary, Visit&& visit) {
    auto emit = [&](const Offset& o) {
        auto r = static_cast<std::int64_t>(row) + o.dr;
        auto c = static_cast<std::int64_t>(col) + o.dc;
        const auto R = static_cast<std::int64_t>(rows);
        const auto C = static_cast<std::int64_t>(cols);
        if (boundary == Boundary::Toroidal) {
            r = (r + R) % R;
            c = (c + C) % C;
        } else if (r < 0 || r >= R || c < 0 || c >= C) {
            return;
        }
        visit(static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c));
    };
    if (nb == Neighborhood::EightCell) {
        for (const auto& o : kEightOffsets) emit(o);
    } else {
        for (const auto& o : kFourOffsets) emit(o);
    }
}

void require_grid(std::size_t rows, std::size_t cols) {
    if (rows < 3 || cols < 3) {
        throw DomainError("lattice must be at least 3x3 (got " + std::to_string(rows) + "x" +
                          std::to_string(cols) + ")");
    }
}

// 53-bit uniform in [0, 1) built from raw engine output, so the sequence
// does not depend on the standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(Neighborhood n) {
    return n == Neighborhood::FourCell ? "four" : "eight";
}

std::string_view to_string(Boundary b) {
    switch (b) {
        case Boundary::Toroidal: return "toroidal";
        case Boundary::Reflecting: return "reflecting";
        case Boundary::Absorbing: return "absorbing";
    }
    return "?";
}

Neighborhood parse_neighborhood(std::string_view s) {
    if (s == "four" || s == "4") return Neighborhood::FourCell;
    if (s == "eight" || s == "8") return Neighborhood::EightCell;
    throw DomainError("unknown neighborhood '" + std::string(s) + "' (expected four|eight)");
}

Boundary parse_boundary(std::string_view s) {
    if (s == "toroidal" || s == "torus" || s == "wrap") return Boundary::Toroidal;
    if (s == "reflecting") return Boundary::Reflecting;
    if (s == "absorbing") return Boundary::Absorbing;
    throw DomainError("unknown boundary '" + std::string(s) +
                      "' (expected toroidal|reflecting|absorbing)");
}

void ModelParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be a positive finite number");
    }
    if (!(mu_x >= 0.0 && mu_x <= 1.0)) throw DomainError("mu_x must lie in [0, 1]");
    if (!(mu_y >= 0.0 && mu_y <= 1.0)) throw DomainError("mu_y must lie in [0, 1]");
}

void LatticeState::validate() const {
    require_grid(rows, cols);
    if (cells.size() != rows * cols) throw DomainError("cell array does not match rows*cols");
    for (const auto& c : cells) {
        if (!(c.x >= 0.0) || !(c.y >= 0.0) || !std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw DomainError("lattice contains a negative or non-finite cell");
        }
    }
}

std::vector<std::size_t> neighbors(std::size_t row, std::size_t col, std::size_t rows,
                                   std::size_t cols, Neighborhood neighborhood,
                                   Boundary boundary) {
    require_grid(rows, cols);
    if (row >= rows || col >= cols) throw DomainError("neighbors: cell out of range");
    std::vector<std::size_t> out;
    out.reserve(8);
    for_each_neighbor(row, col, rows, cols, neighborhood, boundary,
                      [&](std::size_t i) { out.push_back(i); });
    return out;
}

DiffusionStencil::DiffusionStencil(std::size_t rows, std::size_t cols, Neighborhood neighborhood,
                                   Boundary boundary)
    : rows_(rows), cols_(cols), neighborhood_(neighborhood), boundary_(boundary) {
    require_grid(rows, cols);
    const double full = static_cast<double>(static_cast<int>(neighborhood));
    row_ptr_.reserve(rows * cols + 1);
    col_idx_.reserve(rows * cols * static_cast<std::size_t>(full));
    divisor_.reserve(rows * cols);
    row_ptr_.push_back(0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            for_each_neighbor(r, c, rows, cols, neighborhood, boundary, [&](std::size_t i) {
                col_idx_.push_back(static_cast<std::uint32_t>(i));
            });
            const auto count = col_idx_.size() - row_ptr_.back();
            row_ptr_.push_back(col_idx_.size());
            divisor_.push_back(boundary == Boundary::Reflecting ? static_cast<double>(count)
                                                                 : full);
        }
    }
}

namespace {

void diffuse_cell(const DiffusionStencil& stencil, const ModelParams& params,
                  const std::vector<CellState>& tilde, std::vector<CellState>& out,
                  std::size_t i) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = stencil.begin(i); k < stencil.end(i); ++k) {
        const CellState& n = tilde[stencil.neighbor(k)];
        sx += n.x;
        sy += n.y;
    }
    const double d = stencil.divisor(i);
    out[i].x = (1.0 - params.mu_x) * tilde[i].x + (params.mu_x / d) * sx;
    out[i].y = (1.0 - params.mu_y) * tilde[i].y + (params.mu_y / d) * sy;
}

// Interior cells read their neighbors by fixed offsets instead of through the
// index table. The summation order matches the stencil's offset order, so
// both paths give bit-identical results.
void diffuse_rows(const DiffusionStencil& stencil, const ModelParams& params,
                  const std::vector<CellState>& tilde, std::vector<CellState>& out,
                  std::size_t first, std::size_t last) {
    const std::size_t rows = stencil.rows();
    const std::size_t cols = stencil.cols();
    const bool eight = stencil.neighborhood() == Neighborhood::EightCell;
    const double self_x = 1.0 - params.mu_x;
    const double self_y = 1.0 - params.mu_y;
    const double w_x = params.mu_x / (eight ? 8.0 : 4.0);
    const double w_y = params.mu_y / (eight ? 8.0 : 4.0);
    const CellState* t = tilde.data();

    std::size_t i = first;
    while (i < last) {
        const std::size_t r = i / cols;
        const std::size_t c = i % cols;
        if (r == 0 || r + 1 == rows || c == 0 || c + 1 == cols) {
            diffuse_cell(stencil, params, tilde, out, i);
            ++i;
            continue;
        }
        const std::size_t run_end = std::min(last, r * cols + cols - 1);
        for (; i < run_end; ++i) {
            const CellState* up = t + i - cols;
            const CellState* mid = t + i;
            const CellState* dn = t + i + cols;
            double sx;
            double sy;
            if (eight) {
                sx = up[-1].x;
                sx += up[0].x;
                sx += up[1].x;
                sx += mid[-1].x;
                sx += mid[1].x;
                sx += dn[-1].x;
                sx += dn[0].x;
                sx += dn[1].x;
                sy = up[-1].y;
                sy += up[0].y;
                sy += up[1].y;
                sy += mid[-1].y;
                sy += mid[1].y;
                sy += dn[-1].y;
                sy += dn[0].y;
                sy += dn[1].y;
            } else {
                sx = up[0].x;
                sx += mid[-1].x;
                sx += mid[1].x;
                sx += dn[0].x;
                sy = up[0].y;
                sy += mid[-1].y;
                sy += mid[1].y;
                sy += dn[0].y;
            }
            out[i].x = self_x * mid->x + w_x * sx;
            out[i].y = self_y * mid->y + w_y * sy;
        }
    }
}

// Splits [0, n) into at most `parts` contiguous chunks.
template <class Fn>
void chunked(std::size_t n, unsigned parts, Fn&& fn) {
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(parts, n / 1024));
    parallel_for(chunks, static_cast<unsigned>(chunks), [&](std::size_t k) {
        fn(n * k / chunks, n * (k + 1) / chunks);
    });
}

}  // namespace

void diffuse(const DiffusionStencil& stencil, const ModelParams& params,
             const std::vector<CellState>& tilde, std::vector<CellState>& out) {
    out.resize(tilde.size());
    diffuse_rows(stencil, params, tilde, out, 0, tilde.size());
}

LatticeStepper::LatticeStepper(std::size_t rows, std::size_t cols, const ModelParams& params,
                               unsigned threads)
    : params_(params),
      stencil_(rows, cols, params.neighborhood, params.boundary),
      threads_(std::max(1u, threads)),
      tilde_(rows * cols),
      next_(rows * cols) {
    params_.validate();
}

void LatticeStepper::advance(LatticeState& state) {
    if (state.rows != stencil_.rows() || state.cols != stencil_.cols()) {
        throw DomainError("stepper geometry does not match lattice");
    }
    const double lambda = params_.lambda;
    const std::size_t n = state.cells.size();

    chunked(n, threads_, [&](std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) {
            const CellState c = state.cells[i];
            const double e = std::exp(-c.y);
            tilde_[i] = {lambda * c.x * e, c.x * (1.0 - e)};
        }
    });
    // Separate pass so the reported cell is the first in row-major order,
    // independent of how the map was split across workers.
    for (std::size_t i = 0; i < n; ++i) {
        if (!(tilde_[i].x <= kOverflowThreshold) || !(tilde_[i].y <= kOverflowThreshold)) {
            const std::size_t r = i / state.cols;
            const std::size_t c = i % state.cols;
            throw OverflowError("population overflow at cell (" + std::to_string(r) + ", " +
                                    std::to_string(c) + ") in generation " +
                                    std::to_string(state.generation),
                                static_cast<std::int64_t>(r), static_cast<std::int64_t>(c),
                                state.generation);
        }
    }

    chunked(n, threads_, [&](std::size_t first, std::size_t last) {
        diffuse_rows(stencil_, params_, tilde_, next_, first, last);
    });
    state.cells.swap(next_);
    ++state.generation;
}

void LatticeStepper::advance(LatticeState& state, std::uint64_t iterates) {
    for (std::uint64_t t = 0; t < iterates; ++t) advance(state);
}

LatticeState step(const LatticeState& state, const ModelParams& params, unsigned threads) {
    state.validate();
    LatticeStepper stepper(state.rows, state.cols, params, threads);
    LatticeState out = state;
    stepper.advance(out);
    return out;
}

LatticeState relax(const LatticeState& state, const ModelParams& params, std::uint64_t iterates,
                   unsigned threads) {
    state.validate();
    LatticeState out = state;
    if (iterates == 0) return out;
    LatticeStepper stepper(state.rows, state.cols, params, threads);
    stepper.advance(out, iterates);
    return out;
}

LatticeState seed_random(std::size_t rows, std::size_t cols, const ModelParams& params,
                         double amplitude, std::uint64_t rng_seed) {
    require_grid(rows, cols);
    if (!(amplitude >= 0.0)) throw DomainError("seed amplitude must be non-negative");
    const CellState fp = nb_fixed_point(params.lambda);
    LatticeState state(rows, cols, fp);
    if (amplitude == 0.0) return state;
    std::mt19937_64 rng(rng_seed);
    for (auto& c : state.cells) {
        const double dx = amplitude * (2.0 * unit_uniform(rng) - 1.0);
        const double dy = amplitude * (2.0 * unit_uniform(rng) - 1.0);
        c.x = std::max(0.0, fp.x + dx);
        c.y = std::max(0.0, fp.y + dy);
    }
    return state;
}

}  // namespace snb
