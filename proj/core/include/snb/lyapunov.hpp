#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "snb/lattice.hpp"

namespace snb {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Rectangular window into a lattice. On a toroidal lattice the window may
/// wrap around the edges but must not cover any cell twice.
struct SubgridSpec {
    std::size_t row_offset = 0;
    std::size_t col_offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t cells() const noexcept { return rows * cols; }
    std::size_t dim() const noexcept { return 2 * rows * cols; }

    /// Throws DomainError if the window is empty or does not fit.
    void validate(std::size_t lattice_rows, std::size_t lattice_cols, Boundary boundary) const;

    /// Lattice indices of the window cells in window row-major order.
    std::vector<std::size_t> lattice_cells(std::size_t lattice_rows,
                                           std::size_t lattice_cols) const;

    friend bool operator==(const SubgridSpec&, const SubgridSpec&) = default;
};

/// Window covering the whole lattice.
inline SubgridSpec full_window(const LatticeState& s) { return {0, 0, s.rows, s.cols}; }

/// Jacobian of one lattice step at `state`: D * B, with B block-diagonal in
/// the 2x2 local Jacobians and D the diffusion weights (mu_x on x rows, mu_y
/// on y rows). Coordinates are interleaved: 2*cell is x, 2*cell+1 is y.
SparseMatrix assemble_full_jacobian(const LatticeState& state, const ModelParams& params);

/// The full Jacobian restricted to the rows and columns of cells inside
/// `spec`. Cells outside the window drive the window but carry no
/// perturbation.
SparseMatrix assemble_subgrid_jacobian(const LatticeState& state, const ModelParams& params,
                                       const SubgridSpec& spec);

/// Reusable assembler: precomputes the stencil restricted to one window so
/// that repeated assembly along a trajectory only re-evaluates local
/// Jacobians.
class SubgridJacobian {
public:
    SubgridJacobian(std::size_t lattice_rows, std::size_t lattice_cols, const ModelParams& params,
                    const SubgridSpec& spec);

    const SubgridSpec& spec() const noexcept { return spec_; }
    std::size_t dim() const noexcept { return spec_.dim(); }

    /// Writes the Jacobian at `state` into `out`, reusing its storage.
    void assemble(const LatticeState& state, SparseMatrix& out) const;
    SparseMatrix assemble(const LatticeState& state) const;

private:
    struct Link {
        std::uint32_t window_col;  // window-local cell index of the neighbor
        std::uint32_t lattice;     // lattice index of the neighbor
    };

    ModelParams params_;
    SubgridSpec spec_;
    std::vector<std::size_t> cells_;  // lattice index per window cell
    std::vector<std::size_t> link_ptr_;
    std::vector<Link> links_;
    std::vector<double> divisor_;
};

/// Lyapunov spectrum estimated from a cocycle accumulation.
struct LyapunovSpectrum {
    std::vector<double> exponents;  // descending, per-iterate log units
    std::uint64_t iterates = 0;
    double mle = 0.0;
    double proportion_positive = 0.0;
    double mean = 0.0;

    /// Builds a spectrum from raw exponents (sorted here).
    static LyapunovSpectrum from_exponents(std::vector<double> exponents, std::uint64_t iterates);
};

/// QR cocycle accumulation: B = J * Q, B = Q' R with R's diagonal
/// non-negative, log R[k,k] added to the k-th running sum, Q <- Q'.
class CocycleAccumulator {
public:
    explicit CocycleAccumulator(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(q_.rows()); }
    std::uint64_t iterates() const noexcept { return iterates_; }
    const Eigen::MatrixXd& q() const noexcept { return q_; }
    const Eigen::VectorXd& log_diag_sums() const noexcept { return log_sums_; }
    /// Upper triangular factor of the most recent accumulate call.
    const Eigen::MatrixXd& last_r() const noexcept { return r_; }
    bool poisoned() const noexcept { return poisoned_; }

    /// Throws DomainError on a dimension mismatch and SingularFactorError
    /// (after which the accumulator stays poisoned) when |R[k,k]| < 1e-300.
    void accumulate(const Eigen::MatrixXd& jacobian);
    void accumulate(const SparseMatrix& jacobian);

    /// max |Q^T Q - I|; O(dim^3), for checks only.
    double orthogonality_error() const;

private:
    void factor_and_update();

    Eigen::MatrixXd q_;
    Eigen::MatrixXd b_;
    Eigen::MatrixXd r_;
    Eigen::VectorXd log_sums_;
    std::uint64_t iterates_ = 0;
    bool poisoned_ = false;
};

/// Exponents log_diag_sums / iterates, sorted. Throws EmptyAccumulatorError
/// when nothing has been accumulated.
LyapunovSpectrum spectrum(const CocycleAccumulator& acc);

struct TracePoint {
    std::uint64_t iterate = 0;
    double mle = 0.0;
    double proportion_positive = 0.0;
    double mean = 0.0;
};

/// Outcome of accumulating one window along a trajectory. `error` is set if
/// the window was poisoned; the accumulator then holds the state at failure.
struct WindowRun {
    SubgridSpec spec;
    CocycleAccumulator accumulator;
    std::vector<TracePoint> trace;
    std::optional<std::string> error;

    LyapunovSpectrum spectrum() const { return snb::spectrum(accumulator); }
};

struct SpectrumRun {
    std::vector<WindowRun> windows;
    LatticeState final_state;
};

/// Co-evolves the lattice and one accumulator per window for `iterates`
/// steps. Each Jacobian is taken at the pre-step state. Every
/// `checkpoint_every` iterates (0 disables) a trace point is appended per
/// window. Window accumulators run on up to `threads` workers; the result
/// does not depend on the worker count. A poisoned window stops accumulating
/// and records its error; lattice overflow propagates.
SpectrumRun run_spectra(const LatticeState& state, const ModelParams& params,
                        const std::vector<SubgridSpec>& windows, std::uint64_t iterates,
                        std::uint64_t checkpoint_every = 0, unsigned threads = 1);

/// Single-window form. Poisoning is rethrown as SingularFactorError.
struct SingleSpectrumRun {
    CocycleAccumulator accumulator;
    std::vector<TracePoint> trace;
    LatticeState final_state;

    LyapunovSpectrum spectrum() const { return snb::spectrum(accumulator); }
};

SingleSpectrumRun run_spectrum(const LatticeState& state, const ModelParams& params,
                               const SubgridSpec& spec, std::uint64_t iterates,
                               std::uint64_t checkpoint_every = 0);

}  // namespace snb
