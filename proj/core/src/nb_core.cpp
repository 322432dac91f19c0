#include "snb/nb_core.hpp"

#include <string>

#include "snb/errors.hpp"

namespace snb {

CellState nb_map(CellState cell, double lambda) {
    const double e = std::exp(-cell.y);
    CellState out{lambda * cell.x * e, cell.x * (1.0 - e)};
    if (!(out.x <= kOverflowThreshold) || !(out.y <= kOverflowThreshold)) {
        throw OverflowError("nb_map: population exceeded " + std::to_string(kOverflowThreshold),
                            -1, -1, 0);
    }
    return out;
}

Mat2 nb_jacobian(CellState cell, double lambda) {
    const double e = std::exp(-cell.y);
    const double le = lambda * e;
    return {le, -le * cell.x, 1.0 - e, cell.x * e};
}

CellState nb_fixed_point(double lambda) {
    if (!(lambda > 1.0)) {
        throw DomainError("nb_fixed_point: lambda must exceed 1 (got " + std::to_string(lambda) +
                          ")");
    }
    // log1p keeps precision for lambda just above 1.
    const double log_lambda = std::log1p(lambda - 1.0);
    return {lambda * log_lambda / (lambda - 1.0), log_lambda};
}

}  // namespace snb
