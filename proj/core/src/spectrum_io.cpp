#include "snb/spectrum_io.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace snb {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& out, const LyapunovSpectrum& s) {
    out << "index,exponent\n";
    for (std::size_t i = 0; i < s.exponents.size(); ++i) {
        out << i << ',' << format_double(s.exponents[i]) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
    out << "iterate,mle,prop_positive,mean\n";
    for (const auto& p : trace) {
        out << p.iterate << ',' << format_double(p.mle) << ','
            << format_double(p.proportion_positive) << ',' << format_double(p.mean) << '\n';
    }
}

namespace {

nlohmann::ordered_json params_object(const ModelParams& p) {
    nlohmann::ordered_json j;
    j["lambda"] = p.lambda;
    j["mu_x"] = p.mu_x;
    j["mu_y"] = p.mu_y;
    j["neighborhood"] = std::string(to_string(p.neighborhood));
    j["boundary"] = std::string(to_string(p.boundary));
    return j;
}

}  // namespace

std::string params_json(const ModelParams& params) { return params_object(params).dump(); }

std::string spectrum_sidecar_json(const LyapunovSpectrum& s, const ModelParams& params,
                                  const SubgridSpec& window, std::uint64_t rng_seed) {
    nlohmann::ordered_json j;
    j["params"] = params_object(params);
    j["window"] = {{"row_offset", window.row_offset},
                   {"col_offset", window.col_offset},
                   {"rows", window.rows},
                   {"cols", window.cols}};
    j["iterates"] = s.iterates;
    j["mle"] = s.mle;
    j["proportion_positive"] = s.proportion_positive;
    j["mean"] = s.mean;
    j["rng_seed"] = rng_seed;
    return j.dump(2);
}

}  // namespace snb
