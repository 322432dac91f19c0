#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snb/lattice.hpp"
#include "snb/lyapunov.hpp"

namespace snb {

/// Windows plus the relax/accumulate budget of one sampling run.
struct SamplePlan {
    std::vector<SubgridSpec> windows;
    std::uint64_t relax_iterates = 200'000;
    std::uint64_t accumulate_iterates = 3'000;
    double amplitude = 0.05;

    /// Throws DomainError if there are no windows, a window does not fit,
    /// two windows share a cell, or accumulate_iterates is zero.
    void validate(std::size_t rows, std::size_t cols, Boundary boundary) const;
};

/// `count` windows of size `size`x`size` on the block diagonal of the
/// lattice, each centred in its block. Disjoint by construction.
std::vector<SubgridSpec> diagonal_windows(std::size_t rows, std::size_t cols, std::size_t count,
                                          std::size_t size);

/// Every window of a `size`x`size` tiling, row-major. Partial tiles at the
/// bottom/right edge are dropped.
std::vector<SubgridSpec> tiled_windows(std::size_t rows, std::size_t cols, std::size_t size);

enum class Regime { AllNegative, Mixed, AllPositiveMLE };
std::string_view to_string(Regime r);
Regime parse_regime(std::string_view s);

struct WindowOutcome {
    SubgridSpec spec;
    std::optional<LyapunovSpectrum> spectrum;
    std::optional<std::string> error;
};

struct SampleReport {
    std::vector<WindowOutcome> per_window;
    double mle_max = 0.0;
    double mle_min = 0.0;
    double mle_spread = 0.0;
    double mle_mean = 0.0;
    double prop_pos_mean = 0.0;
    double mean_lce = 0.0;
    /// Present when at least four windows produced a spectrum.
    std::optional<double> bimodality_coefficient;
    Regime regime = Regime::Mixed;

    std::vector<double> mles() const;
};

/// Seeds the lattice (fixed point +- plan.amplitude), relaxes it, then runs
/// every window accumulator over the same trajectory. Windows that lose rank
/// are reported in their outcome; if every window fails the
/// SingularFactorError is rethrown. Lattice overflow propagates.
SampleReport run_plan(const ModelParams& params, std::size_t rows, std::size_t cols,
                      const SamplePlan& plan, std::uint64_t rng_seed, unsigned threads = 1);

/// Aggregates window outcomes into a report (statistics and regime).
SampleReport summarize(std::vector<WindowOutcome> outcomes);

struct DiscrepancyConfig {
    double lambda = 2.0;
    Neighborhood neighborhood = Neighborhood::EightCell;
    Boundary boundary = Boundary::Toroidal;
    std::size_t rows = 64;
    std::size_t cols = 64;
    SamplePlan plan;
    std::uint64_t rng_seed = 1;
};

struct DiscrepancyRow {
    double mu_x = 0.0;
    double mu_y = 0.0;
    std::optional<double> mle_max;
    std::optional<double> mle_min;
    std::optional<double> mle_spread;
    std::optional<std::string> error;
};

/// One run_plan per (mu_x, mu_y) point, parallel over points. Failed points
/// keep empty values and an error message. Throws DomainError on an empty
/// grid.
std::vector<DiscrepancyRow> mle_discrepancy_map(
    const std::vector<std::pair<double, double>>& points, const DiscrepancyConfig& config,
    unsigned threads = 1);

/// Sarle's bimodality coefficient (g^2 + 1) / (k + 3(n-1)^2/((n-2)(n-3)))
/// with bias-corrected sample skewness g and excess kurtosis k. Values above
/// kBimodalThreshold suggest bimodality. Zero variance gives 0. Throws
/// TooFewSamplesError for fewer than four values.
double bimodality(const std::vector<double>& values);

/// Coefficient of a uniform distribution.
inline constexpr double kBimodalThreshold = 5.0 / 9.0;

/// `mu_x,mu_y,mle_max,mle_min,mle_spread,prop_pos_mean,regime` header.
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, double mu_x, double mu_y, const SampleReport& r);

/// Full report as JSON, including every window spectrum.
std::string report_json(const SampleReport& report, const ModelParams& params,
                        std::uint64_t rng_seed);

// Crystal diagnostics ------------------------------------------------------

enum class CrystalKind { FixedLattice, LatticeWithWaves, TransientIslands, None };
std::string_view to_string(CrystalKind k);

struct CrystalDiagnosis {
    CrystalKind kind = CrystalKind::None;
    /// Fraction of cells whose x and y changed by less than the tolerance on
    /// every probe step.
    double period1_fraction = 0.0;
    /// Locally crystalline cells per lattice cell, averaged over probes. A
    /// perfect lattice has 1/4.
    double crystal_density = 0.0;
    /// Probes in which at least one island was present.
    std::size_t island_probes = 0;
    std::size_t probes = 0;
};

struct CrystalOptions {
    std::uint64_t probe_iterates = 200;
    double tolerance = 1e-9;
    /// Minimum cells for a cluster to count as an island.
    std::size_t min_island = 4;
    /// Time-averaged crystal density (relative to the perfect lattice's 1/4)
    /// at or above which the lattice counts as globally intact.
    double global_fraction = 0.5;
};

/// A cell is locally crystalline when its x exceeds the lattice mean and all
/// of its eight neighbors lie below the mean.
std::vector<std::uint8_t> crystalline_cells(const LatticeState& state, Boundary boundary);

/// Sizes of clusters of crystalline cells, linking cells whose row and
/// column distances are both at most 2 (the lattice spacing).
std::vector<std::size_t> crystal_clusters(const std::vector<std::uint8_t>& mask,
                                          std::size_t rows, std::size_t cols,
                                          Boundary boundary);

/// Steps the lattice `probe_iterates` times and classifies it:
/// FixedLattice when no cell moves by the tolerance; LatticeWithWaves when
/// the crystal stays globally intact on average while cells fluctuate;
/// TransientIslands when islands appear in some probes only or the lattice
/// is fragmented into islands; None when no island ever forms.
CrystalDiagnosis diagnose_crystal(const LatticeState& state, const ModelParams& params,
                                  const CrystalOptions& options = {});

}  // namespace snb
