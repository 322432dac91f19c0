#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snb/nb_core.hpp"

namespace snb {

enum class Neighborhood : std::uint8_t { FourCell = 4, EightCell = 8 };

/// Toroidal wraps around. Reflecting truncates the neighborhood at the edges
/// and renormalizes the migration weight over the cells that remain, so no
/// population leaves the grid. Absorbing also drops off-grid neighbors but
/// keeps the full-neighborhood weight, so the share addressed to off-grid
/// cells is lost.
enum class Boundary : std::uint8_t { Toroidal = 0, Reflecting = 1, Absorbing = 2 };

std::string_view to_string(Neighborhood n);
std::string_view to_string(Boundary b);
Neighborhood parse_neighborhood(std::string_view s);
Boundary parse_boundary(std::string_view s);

struct ModelParams {
    double lambda = 2.0;
    double mu_x = 0.0;
    double mu_y = 0.0;
    Neighborhood neighborhood = Neighborhood::EightCell;
    Boundary boundary = Boundary::Toroidal;

    /// Throws DomainError unless lambda > 0 and both rates lie in [0, 1].
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Dense row-major grid of cells plus the iterate counter.
struct LatticeState {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<CellState> cells;
    std::uint64_t generation = 0;

    LatticeState() = default;
    LatticeState(std::size_t r, std::size_t c, CellState fill = {})
        : rows(r), cols(c), cells(r * c, fill) {}

    std::size_t size() const noexcept { return cells.size(); }
    std::size_t index(std::size_t r, std::size_t c) const noexcept { return r * cols + c; }
    CellState& at(std::size_t r, std::size_t c) { return cells[index(r, c)]; }
    const CellState& at(std::size_t r, std::size_t c) const { return cells[index(r, c)]; }

    /// Throws DomainError on a shape mismatch, a grid smaller than 3x3, or a
    /// negative or non-finite cell.
    void validate() const;

    friend bool operator==(const LatticeState&, const LatticeState&) = default;
};

/// Neighbor indices of (row, col) in a fixed offset order (row-major over the
/// 3x3 block, centre excluded). Requires rows, cols >= 3 so toroidal
/// neighbors are distinct.
std::vector<std::size_t> neighbors(std::size_t row, std::size_t col, std::size_t rows,
                                   std::size_t cols, Neighborhood neighborhood, Boundary boundary);

/// Neighbor lists of every cell in CSR form, with the divisor used for the
/// migration weight mu / divisor. Built once per grid geometry and shared by
/// the stepper and the Jacobian assembly.
class DiffusionStencil {
public:
    DiffusionStencil(std::size_t rows, std::size_t cols, Neighborhood neighborhood,
                     Boundary boundary);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t cells() const noexcept { return rows_ * cols_; }
    Neighborhood neighborhood() const noexcept { return neighborhood_; }
    Boundary boundary() const noexcept { return boundary_; }

    std::size_t begin(std::size_t cell) const noexcept { return row_ptr_[cell]; }
    std::size_t end(std::size_t cell) const noexcept { return row_ptr_[cell + 1]; }
    std::uint32_t neighbor(std::size_t k) const noexcept { return col_idx_[k]; }
    double divisor(std::size_t cell) const noexcept { return divisor_[cell]; }

    /// Self weight 1 - mu and per-neighbor weight mu / divisor(cell).
    double self_weight(double mu) const noexcept { return 1.0 - mu; }
    double neighbor_weight(std::size_t cell, double mu) const noexcept {
        return mu / divisor_[cell];
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    Neighborhood neighborhood_;
    Boundary boundary_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> divisor_;
};

/// Applies the diffusion phase to an already-mapped field. Exposed so the
/// conservation property can be checked on its own.
void diffuse(const DiffusionStencil& stencil, const ModelParams& params,
             const std::vector<CellState>& tilde, std::vector<CellState>& out);

/// Reusable stepper holding the stencil and a scratch buffer. One step maps
/// every cell with nb_map and then diffuses the mapped field.
class LatticeStepper {
public:
    LatticeStepper(std::size_t rows, std::size_t cols, const ModelParams& params,
                   unsigned threads = 1);

    const DiffusionStencil& stencil() const noexcept { return stencil_; }
    const ModelParams& params() const noexcept { return params_; }

    /// Advances `state` by one generation in place. Throws OverflowError with
    /// the offending cell and generation; `state` is left unchanged then.
    void advance(LatticeState& state);

    /// Advances `state` by `iterates` generations.
    void advance(LatticeState& state, std::uint64_t iterates);

private:
    ModelParams params_;
    DiffusionStencil stencil_;
    unsigned threads_;
    std::vector<CellState> tilde_;
    std::vector<CellState> next_;
};

LatticeState step(const LatticeState& state, const ModelParams& params, unsigned threads = 1);

LatticeState relax(const LatticeState& state, const ModelParams& params, std::uint64_t iterates,
                   unsigned threads = 1);

/// Fixed point of the local map plus independent uniform perturbations in
/// [-amplitude, amplitude] on each coordinate, clamped at zero. The draw
/// sequence depends only on rng_seed.
LatticeState seed_random(std::size_t rows, std::size_t cols, const ModelParams& params,
                         double amplitude, std::uint64_t rng_seed);

}  // namespace snb
