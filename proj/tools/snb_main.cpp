// snb: simulate, sample spectra, sweep, analyse the gingham system, render.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snb/errors.hpp"
#include "snb/gingham.hpp"
#include "snb/lattice.hpp"
#include "snb/lyapunov.hpp"
#include "snb/parallel.hpp"
#include "snb/render.hpp"
#include "snb/sampling.hpp"
#include "snb/snapshot.hpp"
#include "snb/spectrum_io.hpp"
#include "snb/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ModelArgs {
    double lambda = 2.0;
    double mu_x = 0.0;
    double mu_y = 0.0;
    std::string boundary = "toroidal";
    std::string neighborhood = "eight";

    snb::ModelParams params() const {
        snb::ModelParams p{lambda, mu_x, mu_y, snb::parse_neighborhood(neighborhood),
                           snb::parse_boundary(boundary)};
        p.validate();
        return p;
    }
};

void add_model_options(CLI::App* app, ModelArgs& m, bool with_lattice_flags = true) {
    app->add_option("--lambda", m.lambda, "host growth rate")->capture_default_str();
    app->add_option("--mu-x", m.mu_x, "host dispersal fraction")->required();
    app->add_option("--mu-y", m.mu_y, "parasitoid dispersal fraction")->required();
    if (with_lattice_flags) {
        app->add_option("--boundary", m.boundary, "toroidal|reflecting|absorbing")
            ->capture_default_str();
        app->add_option("--neighborhood", m.neighborhood, "four|eight")->capture_default_str();
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw snb::DomainError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw snb::DomainError("cannot write " + path.string());
    out << text;
}

std::string snapshot_name(std::uint64_t generation) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%010llu", static_cast<unsigned long long>(generation));
    return buf;
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
    ModelArgs model;
    std::size_t rows = 64;
    std::size_t cols = 64;
    std::uint64_t seed = 1;
    double amplitude = 0.05;
    std::uint64_t iterates = 0;
    std::uint64_t snapshot_every = 0;
    std::string out = "sim-out";
    bool render = false;
    unsigned threads = 0;
};

int run_simulate(const SimulateArgs& a) {
    const snb::ModelParams params = a.model.params();
    ensure_dir(a.out);
    snb::LatticeState state = snb::seed_random(a.rows, a.cols, params, a.amplitude, a.seed);
    snb::LatticeStepper stepper(a.rows, a.cols, params, snb::resolve_threads(a.threads));

    auto save = [&] {
        const fs::path base = fs::path(a.out) / snapshot_name(state.generation);
        snb::write_snapshot(fs::path(base.string() + ".nbsp"), state, params);
        if (a.render) snb::write_ppm(fs::path(base.string() + ".ppm"), snb::render(state));
    };
    save();
    while (state.generation < a.iterates) {
        std::uint64_t chunk = a.iterates - state.generation;
        if (a.snapshot_every > 0) chunk = std::min(chunk, a.snapshot_every - state.generation % a.snapshot_every);
        stepper.advance(state, chunk);
        if (state.generation == a.iterates ||
            (a.snapshot_every > 0 && state.generation % a.snapshot_every == 0)) {
            save();
        }
    }
    return kExitOk;
}

// lyapunov -------------------------------------------------------------------

struct LyapunovArgs {
    ModelArgs model;
    std::string preset = "desk";
    std::optional<std::size_t> rows;
    std::optional<std::size_t> cols;
    std::vector<std::string> windows;
    std::optional<std::uint64_t> relax;
    std::optional<std::uint64_t> accumulate;
    std::uint64_t checkpoint_every = 100;
    std::uint64_t seed = 1;
    double amplitude = 0.05;
    std::string from;
    std::string out = "lyapunov-out";
    unsigned threads = 0;
};

snb::SubgridSpec parse_window(const std::string& text) {
    std::vector<std::size_t> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoul(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw snb::DomainError("bad --window '" + text + "' (expected row,col,rows,cols)");
        }
    }
    if (v.size() != 4) throw snb::DomainError("bad --window '" + text + "' (expected row,col,rows,cols)");
    return {v[0], v[1], v[2], v[3]};
}

int run_lyapunov(const LyapunovArgs& a) {
    const snb::ModelParams params = a.model.params();

    // desk: 64x64, one centred 16x16 window; paper-scale: 768x512, three
    // disjoint 32x32 windows on the diagonal.
    std::size_t rows = 64, cols = 64, count = 1, size = 16;
    std::uint64_t relax = 200'000, accumulate = 3'000;
    if (a.preset == "paper-scale") {
        rows = 768;
        cols = 512;
        count = 3;
        size = 32;
        relax = 1'000'000;
        accumulate = 6'000;
    } else if (a.preset != "desk") {
        throw snb::DomainError("unknown preset '" + a.preset + "' (expected desk|paper-scale)");
    }

    snb::LatticeState state;
    if (!a.from.empty()) {
        const snb::Snapshot snap = snb::read_snapshot(fs::path(a.from));
        state = snap.state;
        rows = state.rows;
        cols = state.cols;
        relax = 0;
    }
    rows = a.rows.value_or(rows);
    cols = a.cols.value_or(cols);
    if (!a.from.empty() && (rows != state.rows || cols != state.cols)) {
        throw snb::DomainError("--rows/--cols disagree with the snapshot");
    }
    relax = a.relax.value_or(relax);
    accumulate = a.accumulate.value_or(accumulate);

    snb::SamplePlan plan;
    plan.relax_iterates = relax;
    plan.accumulate_iterates = accumulate;
    plan.amplitude = a.amplitude;
    if (a.windows.empty()) {
        plan.windows = snb::diagonal_windows(rows, cols, count, size);
    } else {
        for (const auto& w : a.windows) plan.windows.push_back(parse_window(w));
    }
    plan.validate(rows, cols, params.boundary);

    const unsigned threads = snb::resolve_threads(a.threads);
    if (a.from.empty()) state = snb::seed_random(rows, cols, params, a.amplitude, a.seed);
    snb::LatticeStepper stepper(rows, cols, params, threads);
    stepper.advance(state, relax);
    const auto run =
        snb::run_spectra(state, params, plan.windows, accumulate, a.checkpoint_every, threads);

    ensure_dir(a.out);
    bool any_ok = false;
    std::string first_error;
    for (std::size_t k = 0; k < run.windows.size(); ++k) {
        const auto& w = run.windows[k];
        const std::string stem = "window" + std::to_string(k);
        if (w.error) {
            std::cerr << stem << ": " << *w.error << '\n';
            if (first_error.empty()) first_error = *w.error;
            continue;
        }
        any_ok = true;
        const snb::LyapunovSpectrum s = w.spectrum();
        std::ofstream csv(fs::path(a.out) / (stem + "_spectrum.csv"));
        snb::write_spectrum_csv(csv, s);
        std::ofstream trace(fs::path(a.out) / (stem + "_trace.csv"));
        snb::write_trace_csv(trace, w.trace);
        write_text(fs::path(a.out) / (stem + "_spectrum.json"),
                   snb::spectrum_sidecar_json(s, params, w.spec, a.seed) + "\n");
        std::cout << stem << " mle=" << snb::format_double(s.mle)
                  << " prop_positive=" << snb::format_double(s.proportion_positive)
                  << " mean=" << snb::format_double(s.mean) << '\n';
    }
    if (!any_ok) throw snb::SingularFactorError("every window lost rank: " + first_error, 0);
    return kExitOk;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
    std::string config;
    std::string out;
    std::optional<std::size_t> max_points;
    unsigned threads = 0;
};

int run_sweep_cmd(const SweepArgs& a) {
    snb::SweepConfig config = snb::load_sweep_config(a.config);
    if (!a.out.empty()) config.output_dir = a.out;
    snb::SweepOptions opts;
    opts.threads = snb::resolve_threads(a.threads);
    opts.max_new_points = a.max_points;
    const auto result = snb::run_sweep(config, opts);
    std::size_t failed = 0;
    for (const auto& r : result.records) {
        if (r.status == snb::PointStatus::Overflow || r.status == snb::PointStatus::Singular) ++failed;
    }
    std::cout << "points=" << result.records.size() << " computed=" << result.computed
              << " resumed=" << result.resumed << " failed=" << failed
              << " output=" << config.output_dir << '\n';
    return kExitOk;
}

// gingham --------------------------------------------------------------------

struct GinghamFixedArgs {
    ModelArgs model;
    bool mirror = false;
};

int run_gingham_fixed(const GinghamFixedArgs& a) {
    const snb::ModelParams params = a.model.params();
    snb::GinghamState seed = snb::crystal_seed(params.lambda);
    if (a.mirror) seed = seed.swapped();
    const auto r = snb::find_fixed_point(seed, params);
    std::cout << snb::fixed_point_json(r, params) << '\n';
    return kExitOk;
}

struct GinghamCurvesArgs {
    double lambda = 2.0;
    snb::CurveOptions options;
    std::string out = "curves-out";
    unsigned threads = 0;
};

int run_gingham_curves(const GinghamCurvesArgs& a) {
    const unsigned threads = snb::resolve_threads(a.threads);
    const auto pitchfork = snb::trace_pitchfork_curve(a.lambda, a.options, threads);
    const auto stability = snb::trace_stability_curve(a.lambda, a.options, threads);
    ensure_dir(a.out);
    std::ofstream p(fs::path(a.out) / "pitchfork.csv");
    snb::write_curves_csv(p, pitchfork, {});
    std::ofstream s(fs::path(a.out) / "stability.csv");
    snb::write_curves_csv(s, {}, stability);
    for (const auto& c : pitchfork) {
        if (!c.bracketed) std::cerr << c.error << '\n';
    }
    for (const auto& c : stability) {
        if (!c.bracketed) std::cerr << c.error << '\n';
    }
    return kExitOk;
}

// render ---------------------------------------------------------------------

struct RenderArgs {
    std::vector<std::string> inputs;
    std::string out;
    snb::RenderSpec spec;
};

int run_render(const RenderArgs& a) {
    a.spec.validate();
    const bool single_file = a.inputs.size() == 1 && fs::path(a.out).extension() == ".ppm";
    if (!single_file) ensure_dir(a.out);
    for (const auto& in : a.inputs) {
        const snb::Snapshot snap = snb::read_snapshot(fs::path(in));
        const fs::path target = single_file
                                    ? fs::path(a.out)
                                    : fs::path(a.out) / fs::path(in).filename().replace_extension(".ppm");
        snb::write_ppm(target, snb::render(snap.state, a.spec));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial Nicholson-Bailey lattice toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "seed, iterate and snapshot a lattice");
    add_model_options(simulate, sim.model);
    simulate->add_option("--rows", sim.rows)->capture_default_str();
    simulate->add_option("--cols", sim.cols)->capture_default_str();
    simulate->add_option("--seed", sim.seed)->capture_default_str();
    simulate->add_option("--amplitude", sim.amplitude, "seed perturbation")->capture_default_str();
    simulate->add_option("--iterates", sim.iterates)->capture_default_str();
    simulate->add_option("--snapshot-every", sim.snapshot_every, "0 = first and last only")
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "output directory")->capture_default_str();
    simulate->add_flag("--render", sim.render, "also write a .ppm per snapshot");
    simulate->add_option("--threads", sim.threads, "0 = SNB_THREADS or all cores");

    LyapunovArgs lya;
    auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov spectra of lattice windows");
    add_model_options(lyapunov, lya.model);
    lyapunov->add_option("--preset", lya.preset, "desk|paper-scale")->capture_default_str();
    lyapunov->add_option("--rows", lya.rows);
    lyapunov->add_option("--cols", lya.cols);
    lyapunov->add_option("--window", lya.windows, "row,col,rows,cols (repeatable)");
    lyapunov->add_option("--relax", lya.relax, "relaxation iterates");
    lyapunov->add_option("--accumulate", lya.accumulate, "accumulation iterates");
    lyapunov->add_option("--checkpoint-every", lya.checkpoint_every, "trace interval, 0 = off")
        ->capture_default_str();
    lyapunov->add_option("--seed", lya.seed)->capture_default_str();
    lyapunov->add_option("--amplitude", lya.amplitude)->capture_default_str();
    lyapunov->add_option("--from", lya.from, "start from a snapshot instead of seeding");
    lyapunov->add_option("--out", lya.out)->capture_default_str();
    lyapunov->add_option("--threads", lya.threads);

    SweepArgs swp;
    auto* sweep = app.add_subcommand("sweep", "resumable (mu_x, mu_y) grid sweep");
    sweep->add_option("--config", swp.config, "JSON sweep config")->required();
    sweep->add_option("--out", swp.out, "override output_dir");
    sweep->add_option("--max-points", swp.max_points, "stop after this many new points");
    sweep->add_option("--threads", swp.threads);

    auto* gingham = app.add_subcommand("gingham", "reduced crystal-lattice system");
    gingham->require_subcommand(1);
    GinghamFixedArgs gfix;
    auto* fixed = gingham->add_subcommand("fixed-point", "Newton solve from the crystal seed");
    add_model_options(fixed, gfix.model, false);
    fixed->add_flag("--mirror", gfix.mirror, "start from the A/B mirrored seed");
    GinghamCurvesArgs gcur;
    auto* curves = gingham->add_subcommand("curves", "trace pitchfork and stability curves");
    curves->add_option("--lambda", gcur.lambda)->capture_default_str();
    curves->add_option("--mu-x-min", gcur.options.mu_x_min)->capture_default_str();
    curves->add_option("--mu-x-max", gcur.options.mu_x_max)->capture_default_str();
    curves->add_option("--resolution", gcur.options.resolution)->capture_default_str();
    curves->add_option("--scan-step", gcur.options.scan_step)->capture_default_str();
    curves->add_option("--tolerance", gcur.options.tolerance)->capture_default_str();
    curves->add_option("--out", gcur.out)->capture_default_str();
    curves->add_option("--threads", gcur.threads);

    RenderArgs ren;
    auto* render = app.add_subcommand("render", "snapshot(s) to P6 images");
    render->add_option("inputs", ren.inputs, "snapshot files")->required();
    render->add_option("--out", ren.out, "output .ppm (single input) or directory")->required();
    render->add_option("--low", ren.spec.low_percentile)->capture_default_str();
    render->add_option("--high", ren.spec.high_percentile)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*lyapunov) return run_lyapunov(lya);
        if (*sweep) return run_sweep_cmd(swp);
        if (*fixed) return run_gingham_fixed(gfix);
        if (*curves) return run_gingham_curves(gcur);
        if (*render) return run_render(ren);
    } catch (const snb::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << " (generation " << e.generation() << ")\n";
        return kExitNumeric;
    } catch (const snb::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const snb::FormatError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const snb::Error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
