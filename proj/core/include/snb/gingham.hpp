#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "snb/lattice.hpp"

namespace snb {

/// Reduced crystal-lattice system on the 2x2 fundamental domain. A and B sit
/// on one diagonal of the domain, the two C cells on the other:
///
///     A C
///     C B
///
/// Tiled over an eight-cell toroidal lattice, every A has four C and four B
/// neighbors, and every C has two A, two B and four C neighbors.
struct GinghamState {
    double x_a = 0.0, y_a = 0.0;
    double x_b = 0.0, y_b = 0.0;
    double x_c = 0.0, y_c = 0.0;

    Eigen::Matrix<double, 6, 1> vector() const {
        return (Eigen::Matrix<double, 6, 1>() << x_a, y_a, x_b, y_b, x_c, y_c).finished();
    }
    static GinghamState from_vector(const Eigen::Matrix<double, 6, 1>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    /// Exchanges the A and B cells.
    GinghamState swapped() const { return {x_b, y_b, x_a, y_a, x_c, y_c}; }
    /// Uniform state at the local fixed point.
    static GinghamState symmetric(double lambda);

    friend bool operator==(const GinghamState&, const GinghamState&) = default;
};

using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Mixing weights of the reduced system, rows A, B, C and columns A, B, C,
/// before scaling by mu: own class (1 - mu) + w[i][i] mu, others w[i][j] mu.
inline constexpr std::array<std::array<double, 3>, 3> kGinghamWeights{{
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
    {0.25, 0.25, 0.5},
}};

GinghamState gingham_map(const GinghamState& s, const ModelParams& params);

Mat6 gingham_jacobian(const GinghamState& s, const ModelParams& params);

struct FixedPointResult {
    GinghamState point;
    double residual = 0.0;
    std::array<double, 6> eigenvalue_moduli{};  // ascending
    bool stable = false;
    std::size_t iterations = 0;

    double max_modulus() const { return eigenvalue_moduli.back(); }
};

struct NewtonOptions {
    double tolerance = 1e-12;
    std::size_t max_iter = 100;
};

/// Seed for the asymmetric crystal branch: A carries the high-x / low-y
/// cell, B and C are low-x / high-y.
GinghamState crystal_seed(double lambda);

/// Newton iteration on map(s) - s, carried out in logarithmic coordinates
/// with a backtracking line search so iterates stay positive. Throws
/// NoConvergenceError after max_iter and SingularJacobianError if the
/// Newton system cannot be solved.
FixedPointResult find_fixed_point(const GinghamState& initial, const ModelParams& params,
                                  const NewtonOptions& options = {});

/// Eigenvalue moduli and stability at an arbitrary point (no solve).
FixedPointResult evaluate_fixed_point(const GinghamState& point, const ModelParams& params);

/// max |state_A - state_B|.
double asymmetry(const GinghamState& s);

struct CurvePoint {
    double mu_x = 0.0;
    double mu_y = 0.0;
};

struct CurveOptions {
    double mu_x_min = 0.0;
    double mu_x_max = 0.15;
    double resolution = 0.005;
    double mu_y_min = 0.0;
    double mu_y_max = 1.0;
    /// Coarse scan step in mu_y before bisection.
    double scan_step = 0.01;
    /// Bisection stops once the bracket is narrower than this.
    double tolerance = 1e-4;
    /// Minimum A/B asymmetry for a solution to count as the asymmetric pair.
    double asymmetry_threshold = 1e-6;
};

struct CurveSample {
    double mu_x = 0.0;
    bool bracketed = false;
    double mu_y = 0.0;
    std::string error;
};

/// For each mu_x sample, the mu_y at which the asymmetric fixed-point pair
/// branches off the symmetric point. Samples without a sign change in
/// [mu_y_min, mu_y_max] are reported with bracketed = false.
std::vector<CurveSample> trace_pitchfork_curve(double lambda, const CurveOptions& options = {},
                                               unsigned threads = 1);

/// For each mu_x sample, the mu_y above which the asymmetric pair is stable
/// (largest eigenvalue modulus below 1).
std::vector<CurveSample> trace_stability_curve(double lambda, const CurveOptions& options = {},
                                               unsigned threads = 1);

/// Single-sample forms. Throw CurveNotBracketedError.
double pitchfork_mu_y(double lambda, double mu_x, const CurveOptions& options = {});
double stability_mu_y(double lambda, double mu_x, const CurveOptions& options = {});

/// Asymmetric fixed point at (mu_x, mu_y) reached by continuation in mu_y
/// from the top of the range. Throws NoConvergenceError when the branch
/// does not reach mu_y.
FixedPointResult asymmetric_branch_point(double lambda, double mu_x, double mu_y,
                                         const CurveOptions& options = {});

/// `mu_x,mu_y,curve` rows for the bracketed samples.
void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& pitchfork,
                      const std::vector<CurveSample>& stability);

std::string fixed_point_json(const FixedPointResult& r, const ModelParams& params);

/// Tiles the fundamental domain over a rows x cols lattice (both even):
/// A at (even, even), B at (odd, odd), C elsewhere.
LatticeState tile_gingham(const GinghamState& s, std::size_t rows, std::size_t cols);

}  // namespace snb
