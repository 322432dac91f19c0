#include "snb/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "snb/errors.hpp"
#include "snb/parallel.hpp"
#include "snb/spectrum_io.hpp"

namespace snb {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Layout {
    std::string kind = "diagonal";
    std::size_t count = 3;
    std::size_t size = 16;

    std::vector<SubgridSpec> resolve(std::size_t rows, std::size_t cols) const {
        if (kind == "diagonal") return diagonal_windows(rows, cols, count, size);
        if (kind == "tiled") return tiled_windows(rows, cols, size);
        throw FormatError("unknown window layout '" + kind + "' (expected diagonal|tiled)");
    }
};

std::vector<double> midpoints(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    return v;
}

struct Preset {
    SweepConfig config;
    Layout layout;
};

Preset make_preset(std::string_view name) {
    Preset p;
    p.config.mu_x = midpoints(20);
    p.config.mu_y = midpoints(20);
    if (name == "desk") {
        p.layout = {"diagonal", 3, 16};
    } else if (name == "paper-scale") {
        p.config.rows = 768;
        p.config.cols = 512;
        p.config.plan.relax_iterates = 1'000'000;
        p.config.plan.accumulate_iterates = 6'000;
        p.layout = {"diagonal", 3, 32};
    } else {
        throw DomainError("unknown sweep preset '" + std::string(name) +
                          "' (expected desk|paper-scale)");
    }
    p.config.plan.windows = p.layout.resolve(p.config.rows, p.config.cols);
    return p;
}

void check_axis(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw DomainError(std::string(name) + " list is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
            throw DomainError(std::string(name) + " values must lie in [0, 1]");
        }
        if (i > 0 && !(v[i] > v[i - 1])) {
            throw DomainError(std::string(name) + " values must be strictly increasing");
        }
    }
}

json window_json(const SubgridSpec& w) {
    return {{"row_offset", w.row_offset}, {"col_offset", w.col_offset}, {"rows", w.rows},
            {"cols", w.cols}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

void write_file_atomically(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw DomainError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw DomainError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using Key = std::pair<std::size_t, std::size_t>;  // (iy, ix)

std::string journal_text(const std::map<Key, SweepRecord>& done) {
    std::string out;
    for (const auto& [key, rec] : done) out += record_json_line(rec) + "\n";
    return out;
}

SweepRecord compute_point(const SweepConfig& c, std::size_t ix, std::size_t iy) {
    SweepRecord rec;
    rec.ix = ix;
    rec.iy = iy;
    rec.mu_x = c.mu_x[ix];
    rec.mu_y = c.mu_y[iy];
    rec.seed = point_seed(c.rng_seed, ix, iy);
    try {
        const SampleReport rep = run_plan(c.params_at(ix, iy), c.rows, c.cols, c.plan, rec.seed, 1);
        rec.status = PointStatus::Ok;
        rec.mle = rep.mle_mean;
        rec.mle_max = rep.mle_max;
        rec.mle_min = rep.mle_min;
        rec.mle_spread = rep.mle_spread;
        rec.proportion_positive = rep.prop_pos_mean;
        rec.mean_lce = rep.mean_lce;
        rec.regime = rep.regime;
    } catch (const OverflowError& e) {
        rec.status = PointStatus::Overflow;
        rec.error = e.what();
    } catch (const Error& e) {
        // Rank loss and any other numeric breakdown of the accumulators.
        rec.status = PointStatus::Singular;
        rec.error = e.what();
    }
    return rec;
}

}  // namespace

SweepConfig SweepConfig::preset(std::string_view name) { return make_preset(name).config; }

void SweepConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
    check_axis(mu_x, "mu_x");
    check_axis(mu_y, "mu_y");
    if (rows < 3 || cols < 3) throw DomainError("lattice must be at least 3x3");
    if (output_dir.empty()) throw DomainError("output_dir is empty");
    plan.validate(rows, cols, boundary);
}

ModelParams SweepConfig::params_at(std::size_t ix, std::size_t iy) const {
    return {lambda, mu_x.at(ix), mu_y.at(iy), neighborhood, boundary};
}

SweepConfig parse_sweep_config(std::string_view json_text) {
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw FormatError("sweep config must be a JSON object");
        static const std::vector<std::string> known{
            "preset", "lambda",   "mu_x",     "mu_y",     "rows",      "cols",
            "neighborhood", "boundary", "plan", "rng_seed", "output_dir"};
        for (const auto& [key, _] : j.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw FormatError("unknown sweep config key '" + key + "'");
            }
        }

        Preset base = make_preset(j.value("preset", std::string("desk")));
        SweepConfig c = base.config;
        if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
        if (j.contains("mu_x")) c.mu_x = j.at("mu_x").get<std::vector<double>>();
        if (j.contains("mu_y")) c.mu_y = j.at("mu_y").get<std::vector<double>>();
        if (j.contains("rows")) c.rows = j.at("rows").get<std::size_t>();
        if (j.contains("cols")) c.cols = j.at("cols").get<std::size_t>();
        if (j.contains("neighborhood")) {
            c.neighborhood = parse_neighborhood(j.at("neighborhood").get<std::string>());
        }
        if (j.contains("boundary")) c.boundary = parse_boundary(j.at("boundary").get<std::string>());
        if (j.contains("rng_seed")) c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();

        Layout layout = base.layout;
        std::optional<std::vector<SubgridSpec>> explicit_windows;
        if (j.contains("plan")) {
            const json& p = j.at("plan");
            for (const auto& [key, _] : p.items()) {
                if (key != "relax_iterates" && key != "accumulate_iterates" && key != "amplitude" &&
                    key != "windows" && key != "layout") {
                    throw FormatError("unknown plan key '" + key + "'");
                }
            }
            if (p.contains("relax_iterates")) {
                c.plan.relax_iterates = p.at("relax_iterates").get<std::uint64_t>();
            }
            if (p.contains("accumulate_iterates")) {
                c.plan.accumulate_iterates = p.at("accumulate_iterates").get<std::uint64_t>();
            }
            if (p.contains("amplitude")) c.plan.amplitude = p.at("amplitude").get<double>();
            if (p.contains("windows") && p.contains("layout")) {
                throw FormatError("plan takes either windows or layout, not both");
            }
            if (p.contains("windows")) {
                std::vector<SubgridSpec> ws;
                for (const auto& w : p.at("windows")) {
                    ws.push_back({w.at("row_offset").get<std::size_t>(),
                                  w.at("col_offset").get<std::size_t>(),
                                  w.at("rows").get<std::size_t>(), w.at("cols").get<std::size_t>()});
                }
                explicit_windows = std::move(ws);
            }
            if (p.contains("layout")) {
                const json& l = p.at("layout");
                layout.kind = l.value("kind", std::string("diagonal"));
                layout.count = l.value("count", std::size_t{1});
                layout.size = l.at("size").get<std::size_t>();
            }
        }
        c.plan.windows = explicit_windows ? *explicit_windows : layout.resolve(c.rows, c.cols);
        return c;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sweep config: ") + e.what());
    }
}

SweepConfig load_sweep_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open sweep config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

std::string sweep_config_json(const SweepConfig& c) {
    json j;
    j["lambda"] = c.lambda;
    j["mu_x"] = c.mu_x;
    j["mu_y"] = c.mu_y;
    j["rows"] = c.rows;
    j["cols"] = c.cols;
    j["neighborhood"] = std::string(to_string(c.neighborhood));
    j["boundary"] = std::string(to_string(c.boundary));
    json plan;
    plan["relax_iterates"] = c.plan.relax_iterates;
    plan["accumulate_iterates"] = c.plan.accumulate_iterates;
    plan["amplitude"] = c.plan.amplitude;
    plan["windows"] = json::array();
    for (const auto& w : c.plan.windows) plan["windows"].push_back(window_json(w));
    j["plan"] = plan;
    j["rng_seed"] = c.rng_seed;
    j["output_dir"] = c.output_dir;
    return j.dump(2);
}

std::uint64_t point_seed(std::uint64_t base, std::size_t ix, std::size_t iy) {
    // splitmix64 finalizer
    std::uint64_t z = (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return base ^ z;
}

std::string_view to_string(PointStatus s) {
    switch (s) {
        case PointStatus::Ok: return "ok";
        case PointStatus::Overflow: return "overflow";
        case PointStatus::Singular: return "singular";
        case PointStatus::Skipped: return "skipped";
    }
    return "?";
}

PointStatus parse_point_status(std::string_view s) {
    if (s == "ok") return PointStatus::Ok;
    if (s == "overflow") return PointStatus::Overflow;
    if (s == "singular") return PointStatus::Singular;
    if (s == "skipped") return PointStatus::Skipped;
    throw FormatError("unknown point status '" + std::string(s) + "'");
}

std::string record_json_line(const SweepRecord& r) {
    json j;
    j["ix"] = r.ix;
    j["iy"] = r.iy;
    j["mu_x"] = r.mu_x;
    j["mu_y"] = r.mu_y;
    j["seed"] = r.seed;
    j["status"] = std::string(to_string(r.status));
    j["mle"] = optional_number(r.mle);
    j["mle_max"] = optional_number(r.mle_max);
    j["mle_min"] = optional_number(r.mle_min);
    j["mle_spread"] = optional_number(r.mle_spread);
    j["proportion_positive"] = optional_number(r.proportion_positive);
    j["mean_lce"] = optional_number(r.mean_lce);
    j["regime"] = r.regime ? json(std::string(to_string(*r.regime))) : json(nullptr);
    j["error"] = r.error;
    return j.dump();
}

SweepRecord parse_record_json_line(std::string_view line) {
    try {
        const json j = json::parse(line);
        SweepRecord r;
        r.ix = j.at("ix").get<std::size_t>();
        r.iy = j.at("iy").get<std::size_t>();
        r.mu_x = j.at("mu_x").get<double>();
        r.mu_y = j.at("mu_y").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.status = parse_point_status(j.at("status").get<std::string>());
        r.mle = read_optional(j, "mle");
        r.mle_max = read_optional(j, "mle_max");
        r.mle_min = read_optional(j, "mle_min");
        r.mle_spread = read_optional(j, "mle_spread");
        r.proportion_positive = read_optional(j, "proportion_positive");
        r.mean_lce = read_optional(j, "mean_lce");
        if (j.contains("regime") && !j.at("regime").is_null()) {
            r.regime = parse_regime(j.at("regime").get<std::string>());
        }
        r.error = j.value("error", std::string());
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed journal line: ") + e.what());
    }
}

const SweepRecord& SweepResult::at(std::size_t ix, std::size_t iy) const {
    for (const auto& r : records) {
        if (r.ix == ix && r.iy == iy) return r;
    }
    throw DomainError("no sweep record at (" + std::to_string(ix) + ", " + std::to_string(iy) + ")");
}

SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options) {
    config.validate();
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DomainError("cannot create " + dir.string() + ": " + ec.message());

    // The stored copy ignores output_dir so a moved directory still resumes.
    SweepConfig fingerprint = config;
    fingerprint.output_dir.clear();
    const std::string config_text = sweep_config_json(fingerprint);
    const fs::path config_path = dir / "config.json";
    if (fs::exists(config_path)) {
        if (read_file(config_path) != config_text) {
            throw DomainError(dir.string() + " holds a journal for a different sweep config");
        }
    } else {
        write_file_atomically(config_path, config_text);
    }

    const fs::path journal_path = dir / "journal.jsonl";
    std::map<Key, SweepRecord> done;
    if (fs::exists(journal_path)) {
        std::istringstream in(read_file(journal_path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            SweepRecord r = parse_record_json_line(line);
            if (r.ix >= config.mu_x.size() || r.iy >= config.mu_y.size() ||
                r.mu_x != config.mu_x[r.ix] || r.mu_y != config.mu_y[r.iy]) {
                throw DomainError("journal record does not match the sweep grid: " + line);
            }
            if (r.status != PointStatus::Skipped) done[{r.iy, r.ix}] = std::move(r);
        }
    }

    SweepResult result;
    result.resumed = done.size();
    std::vector<Key> pending;
    for (std::size_t iy = 0; iy < config.mu_y.size(); ++iy) {
        for (std::size_t ix = 0; ix < config.mu_x.size(); ++ix) {
            if (!done.count({iy, ix})) pending.push_back({iy, ix});
        }
    }
    if (options.max_new_points && pending.size() > *options.max_new_points) {
        pending.resize(*options.max_new_points);
    }

    // Single writer: workers hand finished records over under the lock and
    // the journal is rewritten in grid order, so its content does not depend
    // on completion order.
    std::mutex writer;
    parallel_for(pending.size(), resolve_threads(options.threads), [&](std::size_t k) {
        const auto [iy, ix] = pending[k];
        SweepRecord rec = compute_point(config, ix, iy);
        std::lock_guard lock(writer);
        done[{iy, ix}] = std::move(rec);
        write_file_atomically(journal_path, journal_text(done));
    });
    result.computed = pending.size();

    for (std::size_t iy = 0; iy < config.mu_y.size(); ++iy) {
        for (std::size_t ix = 0; ix < config.mu_x.size(); ++ix) {
            auto it = done.find({iy, ix});
            if (it != done.end()) {
                result.records.push_back(it->second);
            } else {
                SweepRecord r;
                r.ix = ix;
                r.iy = iy;
                r.mu_x = config.mu_x[ix];
                r.mu_y = config.mu_y[iy];
                r.seed = point_seed(config.rng_seed, ix, iy);
                r.status = PointStatus::Skipped;
                result.records.push_back(std::move(r));
            }
        }
    }

    std::ostringstream summary;
    write_sweep_summary(summary, result);
    write_file_atomically(dir / "summary.csv", summary.str());
    for (auto q : {SurfaceQuantity::Mle, SurfaceQuantity::PropPos, SurfaceQuantity::Mean}) {
        std::ostringstream s;
        surface_export(s, config, result, q);
        write_file_atomically(dir / ("surface_" + std::string(to_string(q)) + ".csv"), s.str());
    }
    return result;
}

std::string_view to_string(SurfaceQuantity q) {
    switch (q) {
        case SurfaceQuantity::Mle: return "mle";
        case SurfaceQuantity::PropPos: return "prop_pos";
        case SurfaceQuantity::Mean: return "mean";
    }
    return "?";
}

SurfaceQuantity parse_surface_quantity(std::string_view s) {
    if (s == "mle") return SurfaceQuantity::Mle;
    if (s == "prop_pos") return SurfaceQuantity::PropPos;
    if (s == "mean") return SurfaceQuantity::Mean;
    throw DomainError("unknown surface quantity '" + std::string(s) + "' (expected mle|prop_pos|mean)");
}

void surface_export(std::ostream& out, const SweepConfig& config, const SweepResult& result,
                    SurfaceQuantity quantity) {
    std::map<Key, std::optional<double>> values;
    for (const auto& r : result.records) {
        const auto& v = quantity == SurfaceQuantity::Mle       ? r.mle
                        : quantity == SurfaceQuantity::PropPos ? r.proportion_positive
                                                               : r.mean_lce;
        values[{r.iy, r.ix}] = v;
    }
    out << "mu_y\\mu_x";
    for (double x : config.mu_x) out << ',' << format_double(x);
    out << '\n';
    for (std::size_t iy = config.mu_y.size(); iy-- > 0;) {
        out << format_double(config.mu_y[iy]);
        for (std::size_t ix = 0; ix < config.mu_x.size(); ++ix) {
            out << ',';
            auto it = values.find({iy, ix});
            if (it != values.end() && it->second) out << format_double(*it->second);
        }
        out << '\n';
    }
}

void write_sweep_summary(std::ostream& out, const SweepResult& result) {
    write_summary_header(out);
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : result.records) {
        out << format_double(r.mu_x) << ',' << format_double(r.mu_y) << ',' << opt(r.mle_max) << ','
            << opt(r.mle_min) << ',' << opt(r.mle_spread) << ',' << opt(r.proportion_positive) << ','
            << (r.regime ? std::string(to_string(*r.regime)) : std::string()) << '\n';
    }
}

}  // namespace snb
