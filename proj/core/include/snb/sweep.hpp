#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snb/lattice.hpp"
#include "snb/sampling.hpp"

namespace snb {

struct SweepConfig {
    double lambda = 2.0;
    std::vector<double> mu_x;
    std::vector<double> mu_y;
    std::size_t rows = 64;
    std::size_t cols = 64;
    Neighborhood neighborhood = Neighborhood::EightCell;
    Boundary boundary = Boundary::Toroidal;
    SamplePlan plan;
    std::uint64_t rng_seed = 1;
    std::string output_dir = "sweep-out";

    /// "desk": 64x64, three 16x16 diagonal windows, relax 200k, accumulate 3000.
    /// "paper-scale": 768x512, three 32x32 diagonal windows, relax 1e6,
    /// accumulate 6000. Both on the 20x20 grid of cell midpoints of [0,1]^2.
    static SweepConfig preset(std::string_view name);

    /// Throws DomainError: empty or non-increasing mu lists, values outside
    /// [0,1], invalid plan.
    void validate() const;

    ModelParams params_at(std::size_t ix, std::size_t iy) const;
};

/// Reads a JSON config. An optional "preset" key names the starting point;
/// every other key overrides it. Windows come either as an explicit
/// "windows" list or as a "layout" object {"kind": "diagonal"|"tiled",
/// "count", "size"}. Throws FormatError on malformed input.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::filesystem::path& path);
std::string sweep_config_json(const SweepConfig& config);

/// Per-point seed: base XOR a mix of the grid indices, so adding points never
/// changes the seeds of existing ones.
std::uint64_t point_seed(std::uint64_t base, std::size_t ix, std::size_t iy);

enum class PointStatus { Ok, Overflow, Singular, Skipped };
std::string_view to_string(PointStatus s);
PointStatus parse_point_status(std::string_view s);

struct SweepRecord {
    std::size_t ix = 0;
    std::size_t iy = 0;
    double mu_x = 0.0;
    double mu_y = 0.0;
    std::uint64_t seed = 0;
    PointStatus status = PointStatus::Skipped;
    /// Mean window MLE; min/max across windows alongside.
    std::optional<double> mle;
    std::optional<double> mle_max;
    std::optional<double> mle_min;
    std::optional<double> mle_spread;
    std::optional<double> proportion_positive;
    std::optional<double> mean_lce;
    std::optional<Regime> regime;
    std::string error;
};

std::string record_json_line(const SweepRecord& r);
SweepRecord parse_record_json_line(std::string_view line);

struct SweepResult {
    /// One record per grid point, ordered by (iy, ix).
    std::vector<SweepRecord> records;
    std::size_t computed = 0;
    std::size_t resumed = 0;

    const SweepRecord& at(std::size_t ix, std::size_t iy) const;
};

struct SweepOptions {
    unsigned threads = 1;
    /// Stop scheduling after this many newly computed points; the rest are
    /// reported as skipped. Unset runs the whole grid.
    std::optional<std::size_t> max_new_points;
};

/// Runs every grid point not already in `<output_dir>/journal.jsonl`.
/// Each completed point is added to the journal by rewriting it to a
/// temporary file and renaming over the original. A `config.json` copy is
/// kept in the output directory; resuming with a different config throws
/// DomainError. Finally writes summary.csv and the three surfaces.
SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options = {});

enum class SurfaceQuantity { Mle, PropPos, Mean };
std::string_view to_string(SurfaceQuantity q);
SurfaceQuantity parse_surface_quantity(std::string_view s);

/// Matrix with mu_y descending down the rows and mu_x ascending across the
/// columns; the first row and column hold the axis values. Points without a
/// value are empty fields.
void surface_export(std::ostream& out, const SweepConfig& config, const SweepResult& result,
                    SurfaceQuantity quantity);

/// `mu_x,mu_y,mle_max,mle_min,mle_spread,prop_pos_mean,regime`, one row per
/// point in (iy, ix) order; failed points keep empty fields.
void write_sweep_summary(std::ostream& out, const SweepResult& result);

}  // namespace snb
