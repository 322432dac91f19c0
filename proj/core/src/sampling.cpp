#include "snb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "snb/errors.hpp"
#include "snb/parallel.hpp"
#include "snb/spectrum_io.hpp"

namespace snb {

void SamplePlan::validate(std::size_t rows, std::size_t cols, Boundary boundary) const {
    if (windows.empty()) throw DomainError("sample plan has no windows");
    if (accumulate_iterates == 0) throw DomainError("accumulate_iterates must be positive");
    if (!(amplitude >= 0.0)) throw DomainError("seed amplitude must be non-negative");
    std::vector<std::uint8_t> used(rows * cols, 0);
    for (const auto& w : windows) {
        w.validate(rows, cols, boundary);
        for (auto i : w.lattice_cells(rows, cols)) {
            if (used[i]) throw DomainError("sample plan windows overlap");
            used[i] = 1;
        }
    }
}

std::vector<SubgridSpec> diagonal_windows(std::size_t rows, std::size_t cols, std::size_t count,
                                          std::size_t size) {
    if (count == 0 || size == 0) throw DomainError("diagonal_windows: empty layout");
    if (count * size > rows || count * size > cols) {
        throw DomainError("diagonal_windows: windows do not fit on the block diagonal");
    }
    std::vector<SubgridSpec> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t r0 = i * rows / count;
        const std::size_t r1 = (i + 1) * rows / count;
        const std::size_t c0 = i * cols / count;
        const std::size_t c1 = (i + 1) * cols / count;
        out.push_back({r0 + (r1 - r0 - size) / 2, c0 + (c1 - c0 - size) / 2, size, size});
    }
    return out;
}

std::vector<SubgridSpec> tiled_windows(std::size_t rows, std::size_t cols, std::size_t size) {
    if (size == 0 || size > rows || size > cols) throw DomainError("tiled_windows: bad size");
    std::vector<SubgridSpec> out;
    for (std::size_t r = 0; r + size <= rows; r += size) {
        for (std::size_t c = 0; c + size <= cols; c += size) out.push_back({r, c, size, size});
    }
    return out;
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::AllNegative: return "AllNegative";
        case Regime::Mixed: return "Mixed";
        case Regime::AllPositiveMLE: return "AllPositiveMLE";
    }
    return "?";
}

Regime parse_regime(std::string_view s) {
    if (s == "AllNegative") return Regime::AllNegative;
    if (s == "Mixed") return Regime::Mixed;
    if (s == "AllPositiveMLE") return Regime::AllPositiveMLE;
    throw FormatError("unknown regime '" + std::string(s) + "'");
}

std::vector<double> SampleReport::mles() const {
    std::vector<double> out;
    for (const auto& w : per_window) {
        if (w.spectrum) out.push_back(w.spectrum->mle);
    }
    return out;
}

SampleReport summarize(std::vector<WindowOutcome> outcomes) {
    SampleReport r;
    r.per_window = std::move(outcomes);
    const auto mles = r.mles();
    if (mles.empty()) return r;

    const auto n = static_cast<double>(mles.size());
    r.mle_max = *std::max_element(mles.begin(), mles.end());
    r.mle_min = *std::min_element(mles.begin(), mles.end());
    r.mle_spread = r.mle_max - r.mle_min;
    r.mle_mean = std::accumulate(mles.begin(), mles.end(), 0.0) / n;
    double prop = 0.0;
    double mean = 0.0;
    for (const auto& w : r.per_window) {
        if (!w.spectrum) continue;
        prop += w.spectrum->proportion_positive;
        mean += w.spectrum->mean;
    }
    r.prop_pos_mean = prop / n;
    r.mean_lce = mean / n;
    if (mles.size() >= 4) r.bimodality_coefficient = bimodality(mles);

    const bool all_neg = std::all_of(mles.begin(), mles.end(), [](double v) { return v < 0.0; });
    const bool all_pos = std::all_of(mles.begin(), mles.end(), [](double v) { return v > 0.0; });
    r.regime = all_neg ? Regime::AllNegative : all_pos ? Regime::AllPositiveMLE : Regime::Mixed;
    return r;
}

SampleReport run_plan(const ModelParams& params, std::size_t rows, std::size_t cols,
                      const SamplePlan& plan, std::uint64_t rng_seed, unsigned threads) {
    params.validate();
    plan.validate(rows, cols, params.boundary);

    LatticeState state = seed_random(rows, cols, params, plan.amplitude, rng_seed);
    LatticeStepper stepper(rows, cols, params);
    stepper.advance(state, plan.relax_iterates);

    auto run = run_spectra(state, params, plan.windows, plan.accumulate_iterates, 0, threads);

    std::vector<WindowOutcome> outcomes;
    std::optional<std::string> first_error;
    for (auto& w : run.windows) {
        WindowOutcome o{w.spec, {}, w.error};
        if (!w.error) o.spectrum = w.spectrum();
        else if (!first_error) first_error = w.error;
        outcomes.push_back(std::move(o));
    }
    SampleReport report = summarize(std::move(outcomes));
    if (report.mles().empty()) {
        throw SingularFactorError("every window lost rank: " + first_error.value_or("?"), 0);
    }
    return report;
}

std::vector<DiscrepancyRow> mle_discrepancy_map(
    const std::vector<std::pair<double, double>>& points, const DiscrepancyConfig& config,
    unsigned threads) {
    if (points.empty()) throw DomainError("mle_discrepancy_map: empty parameter grid");
    std::vector<DiscrepancyRow> rows(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        DiscrepancyRow& row = rows[i];
        row.mu_x = points[i].first;
        row.mu_y = points[i].second;
        const ModelParams params{config.lambda, row.mu_x, row.mu_y, config.neighborhood,
                                 config.boundary};
        try {
            const auto rep = run_plan(params, config.rows, config.cols, config.plan,
                                      config.rng_seed, 1);
            row.mle_max = rep.mle_max;
            row.mle_min = rep.mle_min;
            row.mle_spread = rep.mle_spread;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

double bimodality(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 4) throw TooFewSamplesError("bimodality needs at least 4 values");
    const double nd = static_cast<double>(n);

    // Order-independent: moments accumulated over a sorted copy.
    std::vector<double> v(values);
    std::sort(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / nd;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    if (!(m2 > 1e-300) || m2 <= 1e-24 * mean * mean) return 0.0;

    const double g1 = m3 / std::pow(m2, 1.5);
    const double g2 = m4 / (m2 * m2) - 3.0;
    const double skew = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
    const double kurt = (nd - 1.0) / ((nd - 2.0) * (nd - 3.0)) * ((nd + 1.0) * g2 + 6.0);
    const double corr = 3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    const double bc = (skew * skew + 1.0) / (kurt + corr);
    return std::clamp(bc, 0.0, 1.0);
}

void write_summary_header(std::ostream& out) {
    out << "mu_x,mu_y,mle_max,mle_min,mle_spread,prop_pos_mean,regime\n";
}

void write_summary_row(std::ostream& out, double mu_x, double mu_y, const SampleReport& r) {
    out << format_double(mu_x) << ',' << format_double(mu_y) << ',' << format_double(r.mle_max)
        << ',' << format_double(r.mle_min) << ',' << format_double(r.mle_spread) << ','
        << format_double(r.prop_pos_mean) << ',' << to_string(r.regime) << '\n';
}

std::string report_json(const SampleReport& report, const ModelParams& params,
                        std::uint64_t rng_seed) {
    nlohmann::ordered_json j;
    j["params"] = nlohmann::ordered_json::parse(params_json(params));
    j["rng_seed"] = rng_seed;
    j["mle_max"] = report.mle_max;
    j["mle_min"] = report.mle_min;
    j["mle_spread"] = report.mle_spread;
    j["prop_pos_mean"] = report.prop_pos_mean;
    j["mean_lce"] = report.mean_lce;
    j["bimodality_coefficient"] = report.bimodality_coefficient
                                      ? nlohmann::ordered_json(*report.bimodality_coefficient)
                                      : nlohmann::ordered_json(nullptr);
    j["regime"] = std::string(to_string(report.regime));
    auto& windows = j["windows"] = nlohmann::ordered_json::array();
    for (const auto& w : report.per_window) {
        nlohmann::ordered_json wj;
        wj["window"] = {{"row_offset", w.spec.row_offset},
                        {"col_offset", w.spec.col_offset},
                        {"rows", w.spec.rows},
                        {"cols", w.spec.cols}};
        if (w.spectrum) {
            wj["iterates"] = w.spectrum->iterates;
            wj["mle"] = w.spectrum->mle;
            wj["proportion_positive"] = w.spectrum->proportion_positive;
            wj["mean"] = w.spectrum->mean;
            wj["exponents"] = w.spectrum->exponents;
        } else {
            wj["error"] = w.error.value_or("");
        }
        windows.push_back(std::move(wj));
    }
    return j.dump(2);
}

}  // namespace snb
