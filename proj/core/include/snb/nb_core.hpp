#pragma once

#include <array>
#include <cmath>

namespace snb {

/// Host (x) and parasitoid (y) population of one cell.
struct CellState {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const CellState&, const CellState&) = default;
};

/// Row-major 2x2 matrix: {d x'/dx, d x'/dy, d y'/dx, d y'/dy}.
using Mat2 = std::array<double, 4>;

/// Values above this are treated as blow-up rather than propagated.
inline constexpr double kOverflowThreshold = 1e100;

/// Nicholson-Bailey update (lambda x e^{-y}, x (1 - e^{-y})).
/// Throws OverflowError when either output exceeds kOverflowThreshold or is
/// not finite.
CellState nb_map(CellState cell, double lambda);

/// Exact partial derivatives of nb_map at `cell`.
Mat2 nb_jacobian(CellState cell, double lambda);

/// Map and Jacobian sharing a single exp(-y) evaluation. No overflow check.
inline void nb_map_and_jacobian(CellState cell, double lambda, CellState& out, Mat2& jac) {
    const double e = std::exp(-cell.y);
    const double le = lambda * e;
    out = {lambda * cell.x * e, cell.x * (1.0 - e)};
    jac = {le, -le * cell.x, 1.0 - e, cell.x * e};
}

/// Coexistence fixed point (lambda ln lambda / (lambda - 1), ln lambda).
/// Throws DomainError for lambda <= 1.
CellState nb_fixed_point(double lambda);

}  // namespace snb
