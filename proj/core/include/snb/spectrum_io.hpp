#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "snb/lyapunov.hpp"

namespace snb {

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double v);

/// `index,exponent` rows, one per exponent in descending order.
void write_spectrum_csv(std::ostream& out, const LyapunovSpectrum& s);

/// `iterate,mle,prop_positive,mean` rows.
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

/// JSON sidecar: params, window, iterates, mle, proportion_positive, mean,
/// rng_seed.
std::string spectrum_sidecar_json(const LyapunovSpectrum& s, const ModelParams& params,
                                  const SubgridSpec& window, std::uint64_t rng_seed);

/// Parameter block shared by all JSON outputs.
std::string params_json(const ModelParams& params);

}  // namespace snb
