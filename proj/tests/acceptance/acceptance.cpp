// Acceptance runner: one PASS/FAIL line per criterion.
//
//   snb_acceptance [--out DIR] [--threads N] [--only K ...] [--full]
//
// Criteria 6-9 write their spectra and reports under DIR/cNN; criterion 11
// reruns reduced replicas of 6-9 (full ones with --full) and compares the
// files byte for byte. The exit status is nonzero when a selected criterion
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "snb/errors.hpp"
#include "snb/gingham.hpp"
#include "snb/lattice.hpp"
#include "snb/lyapunov.hpp"
#include "snb/nb_core.hpp"
#include "snb/parallel.hpp"
#include "snb/sampling.hpp"
#include "snb/spectrum_io.hpp"
#include "snb/sweep.hpp"

namespace fs = std::filesystem;
using namespace snb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

enum class Budget { Standard, Full, Reduced };

struct Run {
    fs::path dir;
    unsigned threads = 1;
    Budget budget = Budget::Standard;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g6(double v) { return fmt("%.6g", v); }

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_window(const fs::path& dir, const std::string& stem, const WindowRun& w,
                  const ModelParams& p, std::uint64_t seed) {
    const auto s = w.spectrum();
    std::ostringstream csv, trace;
    write_spectrum_csv(csv, s);
    write_trace_csv(trace, w.trace);
    write_text(dir / (stem + "_spectrum.csv"), csv.str());
    write_text(dir / (stem + "_trace.csv"), trace.str());
    write_text(dir / (stem + "_spectrum.json"), spectrum_sidecar_json(s, p, w.spec, seed));
}

ModelParams bulk(double mu_x, double mu_y) {
    return {2.0, mu_x, mu_y, Neighborhood::EightCell, Boundary::Toroidal};
}

LatticeState relaxed(std::size_t rows, std::size_t cols, const ModelParams& p,
                     std::uint64_t relax_iterates, std::uint64_t seed, unsigned threads) {
    return relax(seed_random(rows, cols, p, 0.05, seed), p, relax_iterates, threads);
}

// 1 ------------------------------------------------------------------------

Outcome c1(const Run&) {
    const CellState fp = nb_fixed_point(2.0);
    const CellState m = nb_map(fp, 2.0);
    const double err = std::max(std::abs(fp.x - 1.3862944), std::abs(fp.y - 0.6931472));
    const double res = std::max(std::abs(m.x - fp.x), std::abs(m.y - fp.y));
    return {err < 1e-6 && res < 1e-12,
            "fixed point (" + fmt("%.9f", fp.x) + ", " + fmt("%.9f", fp.y) + "), |err| " + g6(err) +
                ", map residual " + g6(res)};
}

// 2 ------------------------------------------------------------------------

Eigen::MatrixXd subgrid_fd(const LatticeState& s, const ModelParams& p, const SubgridSpec& w) {
    const auto cells = w.lattice_cells(s.rows, s.cols);
    Eigen::VectorXd at(2 * cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        at[2 * k] = s.cells[cells[k]].x;
        at[2 * k + 1] = s.cells[cells[k]].y;
    }
    return oracle::central_differences(at, [&](const Eigen::VectorXd& v) {
        LatticeState t = s;
        for (std::size_t k = 0; k < cells.size(); ++k) t.cells[cells[k]] = {v[2 * k], v[2 * k + 1]};
        const LatticeState n = step(t, p);
        Eigen::VectorXd out(2 * cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out[2 * k] = n.cells[cells[k]].x;
            out[2 * k + 1] = n.cells[cells[k]].y;
        }
        return out;
    });
}

Outcome c2(const Run&) {
    constexpr int kStates = 100;
    constexpr double kTol = 1e-5;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::uniform_real_distribution<double> mu(0.0, 1.0);
    const Boundary boundaries[] = {Boundary::Toroidal, Boundary::Reflecting, Boundary::Absorbing};
    const Neighborhood hoods[] = {Neighborhood::EightCell, Neighborhood::FourCell};

    double e_cell = 0.0, e_full = 0.0, e_sub = 0.0, e_ging = 0.0;
    for (int k = 0; k < kStates; ++k) {
        const CellState c{u(rng), u(rng)};
        const Mat2 j = nb_jacobian(c, 2.0);
        Eigen::Matrix2d a;
        a << j[0], j[1], j[2], j[3];
        Eigen::VectorXd at(2);
        at << c.x, c.y;
        const auto fd = oracle::central_differences(at, [](const Eigen::VectorXd& v) {
            const CellState m = nb_map({v[0], v[1]}, 2.0);
            Eigen::VectorXd out(2);
            out << m.x, m.y;
            return out;
        });
        e_cell = std::max(e_cell, oracle::relative_error(a, fd));
    }
    for (int k = 0; k < kStates; ++k) {
        ModelParams p = bulk(mu(rng), mu(rng));
        p.boundary = boundaries[k % 3];
        p.neighborhood = hoods[(k / 3) % 2];
        const std::size_t rows = 3 + k % 4;
        const std::size_t cols = 3 + (k / 4) % 4;
        const auto s = oracle::random_state(rows, cols, rng);
        const Eigen::MatrixXd a(assemble_full_jacobian(s, p));
        e_full = std::max(e_full, oracle::relative_error(a, oracle::lattice_fd_jacobian(s, p)));
    }
    for (int k = 0; k < kStates; ++k) {
        ModelParams p = bulk(mu(rng), mu(rng));
        p.boundary = boundaries[k % 3];
        const auto s = oracle::random_state(12, 12, rng);
        const SubgridSpec w{static_cast<std::size_t>(k % 9), static_cast<std::size_t>((k / 9) % 9),
                            4, 4};
        const Eigen::MatrixXd a(assemble_subgrid_jacobian(s, p, w));
        e_sub = std::max(e_sub, oracle::relative_error(a, subgrid_fd(s, p, w)));
    }
    for (int k = 0; k < kStates; ++k) {
        const ModelParams p = bulk(mu(rng), mu(rng));
        const GinghamState g{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const Eigen::MatrixXd a(gingham_jacobian(g, p));
        e_ging = std::max(e_ging, oracle::relative_error(a, oracle::gingham_fd_jacobian(g, p)));
    }
    const bool pass = e_cell < kTol && e_full < kTol && e_sub < kTol && e_ging < kTol;
    return {pass, "max relative error: cell " + g6(e_cell) + ", full " + g6(e_full) +
                      ", subgrid " + g6(e_sub) + ", gingham " + g6(e_ging)};
}

// 3 ------------------------------------------------------------------------

Outcome c3(const Run&) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + trial % 8;
        const int len = 1 + (trial / 8) % 6;
        std::vector<Eigen::MatrixXd> seq;
        CocycleAccumulator acc(dim);
        Eigen::MatrixXd r_prod = Eigen::MatrixXd::Identity(dim, dim);
        for (int t = 0; t < len; ++t) {
            Eigen::MatrixXd j(dim, dim);
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) j(a, b) = u(rng);
            seq.push_back(j);
            acc.accumulate(j);
            r_prod = acc.last_r() * r_prod;
        }
        const Eigen::MatrixXd rebuilt = acc.q() * r_prod;
        worst = std::max(worst, oracle::relative_error(rebuilt, oracle::raw_product(seq)));
    }

    CocycleAccumulator diag(3);
    const Eigen::MatrixXd d = Eigen::Vector3d(4.0, 1.0, 0.25).asDiagonal();
    for (int t = 0; t < 50; ++t) diag.accumulate(d);
    const auto s = spectrum(diag);
    const double e_diag = std::max({std::abs(s.exponents[0] - std::log(4.0)),
                                    std::abs(s.exponents[1]),
                                    std::abs(s.exponents[2] + std::log(4.0))});
    return {worst < 1e-8 && e_diag < 1e-12,
            "reconstruction error " + g6(worst) + ", diag(4,1,0.25) exponent error " + g6(e_diag)};
}

// 4, 5 ---------------------------------------------------------------------

FixedPointResult reported_point() {
    return find_fixed_point(crystal_seed(2.0), bulk(0.05, 0.99));
}

Outcome c4(const Run&) {
    const auto r = reported_point();
    const GinghamState want{26.17, 0.64, 0.69, 6.32, 0.37, 3.42};
    const double err = (r.point.vector() - want.vector()).cwiseAbs().maxCoeff();
    const GinghamState& p = r.point;
    std::string pt = "(";
    for (double v : {p.x_a, p.y_a, p.x_b, p.y_b, p.x_c, p.y_c}) pt += fmt("%.4f", v) + " ";
    pt.back() = ')';
    return {err < 0.01 && r.max_modulus() < 1.0,
            "point " + pt + ", max |component err| " + g6(err) + ", max modulus " +
                g6(r.max_modulus()) + ", " + std::to_string(r.iterations) + " Newton steps"};
}

Outcome c5(const Run&) {
    const ModelParams p = bulk(0.05, 0.99);
    const LatticeState tiled = tile_gingham(reported_point().point, 8, 8);
    const LatticeState next = step(tiled, p);
    double err = 0.0;
    for (std::size_t i = 0; i < tiled.size(); ++i) {
        err = std::max({err, std::abs(next.cells[i].x - tiled.cells[i].x),
                        std::abs(next.cells[i].y - tiled.cells[i].y)});
    }
    return {err < 1e-9, "8x8 tiled step residual " + g6(err)};
}

// 6 ------------------------------------------------------------------------

Outcome c6(const Run& run) {
    const bool reduced = run.budget == Budget::Reduced;
    const std::size_t n = reduced ? 32 : 64;
    const std::uint64_t relax_n = reduced ? 2000 : 200'000;
    const std::uint64_t acc_n = reduced ? 100 : 3000;
    const std::size_t win = reduced ? 8 : 16;
    const ModelParams p = bulk(0.05, 0.99);
    const std::uint64_t seed = 1;

    const auto s = relaxed(n, n, p, relax_n, seed, run.threads);
    const auto windows = diagonal_windows(n, n, 1, win);
    const auto r = run_spectra(s, p, windows, acc_n, 100, run.threads);
    write_window(run.dir, "window0", r.windows[0], p, seed);
    const auto spec = r.windows[0].spectrum();
    const double top = spec.exponents.front();
    return {top < 0.0, std::to_string(n) + "x" + std::to_string(n) + ", " + std::to_string(win) +
                           "x" + std::to_string(win) + " window: largest exponent " + g6(top) +
                           ", mean " + g6(spec.mean)};
}

// 7 ------------------------------------------------------------------------

// Linearly interpolated quantile of an ascending sample.
double quantile(const std::vector<double>& asc, double q) {
    const double pos = q * static_cast<double>(asc.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, asc.size() - 1);
    return asc[lo] + (pos - static_cast<double>(lo)) * (asc[hi] - asc[lo]);
}

Outcome c7(const Run& run) {
    // Small tori at this point can synchronize and overflow; seed 2 is the
    // first seed whose 24x24 trajectory survives.
    std::size_t rows = 24, cols = 24, win = 12;
    std::uint64_t relax_n = 1000, acc_n = 3000, seed = 2;
    if (run.budget == Budget::Full) {
        rows = 48, cols = 32, win = 16, seed = 1;
    } else if (run.budget == Budget::Reduced) {
        rows = 16, cols = 16, win = 8, relax_n = 200, acc_n = 100;
    }
    const ModelParams p = bulk(0.6, 0.8);
    const auto s = relaxed(rows, cols, p, relax_n, seed, run.threads);
    const SubgridSpec full{0, 0, rows, cols};
    const SubgridSpec sub{(rows - win) / 2, (cols - win) / 2, win, win};
    const auto r = run_spectra(s, p, {full, sub}, acc_n, 100, run.threads);
    write_window(run.dir, "full", r.windows[0], p, seed);
    write_window(run.dir, "subgrid", r.windows[1], p, seed);

    const auto a = r.windows[0].spectrum();
    const auto b = r.windows[1].spectrum();
    std::vector<double> qa(a.exponents.rbegin(), a.exponents.rend());
    std::vector<double> qb(b.exponents.rbegin(), b.exponents.rend());
    double gap = 0.0;
    for (int k = 0; k <= 100; ++k) {
        gap = std::max(gap, std::abs(quantile(qa, k / 100.0) - quantile(qb, k / 100.0)));
    }
    const double range = qa.back() - qa.front();
    const double rel = std::abs(a.mle - b.mle) / std::abs(a.mle);
    const double dprop = std::abs(a.proportion_positive - b.proportion_positive);

    const bool pos = a.mle > 0.0 && b.mle > 0.0;
    const bool pass = pos && rel <= 0.15 && dprop <= 0.10 && gap < 0.15 * range;
    std::string d = std::to_string(rows) + "x" + std::to_string(cols) + " vs " +
                    std::to_string(win) + "x" + std::to_string(win) + " (seed " +
                    std::to_string(seed) + "): mle " + g6(a.mle) + " / " + g6(b.mle) +
                    (pos ? "" : " [not both > 0]") + ", mle rel diff " + g6(rel) +
                    (rel <= 0.15 ? "" : " [> 0.15]") + ", prop_pos " +
                    g6(a.proportion_positive) + " / " + g6(b.proportion_positive) +
                    (dprop <= 0.10 ? "" : " [> 0.10]") + ", quantile gap " + g6(gap) + " vs " +
                    g6(0.15 * range) + (gap < 0.15 * range ? "" : " [too wide]");
    return {pass, d};
}

// 8 ------------------------------------------------------------------------

Outcome c8(const Run& run) {
    const bool reduced = run.budget == Budget::Reduced;
    const std::size_t n = reduced ? 32 : 64;
    const std::uint64_t relax_n = reduced ? 2000 : 200'000;
    const std::vector<std::uint64_t> seeds =
        reduced ? std::vector<std::uint64_t>{1, 2} : std::vector<std::uint64_t>{1, 2, 3, 4, 5};
    const std::vector<std::pair<double, CrystalKind>> ladder = {
        {0.99, CrystalKind::FixedLattice},
        {0.98, CrystalKind::LatticeWithWaves},
        {0.95, CrystalKind::TransientIslands}};

    std::vector<CrystalDiagnosis> diag(ladder.size() * seeds.size());
    parallel_for(diag.size(), run.threads, [&](std::size_t i) {
        const ModelParams p = bulk(0.08, ladder[i / seeds.size()].first);
        const auto s = relaxed(n, n, p, relax_n, seeds[i % seeds.size()], 1);
        diag[i] = diagnose_crystal(s, p);
    });

    std::ostringstream csv;
    csv << "mu_y,seed,kind,period1_fraction,crystal_density,island_probes,probes\n";
    bool pass = true;
    std::string d;
    for (std::size_t l = 0; l < ladder.size(); ++l) {
        std::map<CrystalKind, int> votes;
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            const auto& x = diag[l * seeds.size() + k];
            ++votes[x.kind];
            csv << format_double(ladder[l].first) << ',' << seeds[k] << ',' << to_string(x.kind)
                << ',' << format_double(x.period1_fraction) << ','
                << format_double(x.crystal_density) << ',' << x.island_probes << ',' << x.probes
                << '\n';
        }
        const int want = votes[ladder[l].second];
        const bool ok = 2 * want > static_cast<int>(seeds.size());
        pass = pass && ok;
        d += (l ? "; " : "") + fmt("%.2f", ladder[l].first) + ": " + std::to_string(want) + "/" +
             std::to_string(seeds.size()) + " " + std::string(to_string(ladder[l].second));
    }
    write_text(run.dir / "diagnoses.csv", csv.str());
    return {pass, d};
}

// 9 ------------------------------------------------------------------------

Outcome c9(const Run& run) {
    const bool reduced = run.budget == Budget::Reduced;
    SweepConfig desk = SweepConfig::preset("desk");
    std::size_t n = desk.rows;
    SamplePlan plan = desk.plan;
    if (reduced) {
        n = 32;
        plan.windows = diagonal_windows(n, n, 3, 8);
        plan.relax_iterates = 2000;
        plan.accumulate_iterates = 100;
    }
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    const std::pair<double, double> boundary{0.05, 0.97}, interior{0.6, 0.8};

    std::vector<SampleReport> reports(2 * seeds.size());
    parallel_for(reports.size(), run.threads, [&](std::size_t i) {
        const auto& pt = i % 2 == 0 ? boundary : interior;
        reports[i] = run_plan(bulk(pt.first, pt.second), n, n, plan, seeds[i / 2], 1);
    });

    bool pass = true;
    std::string d;
    std::ostringstream csv;
    write_summary_header(csv);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto& a = reports[2 * k];
        const auto& b = reports[2 * k + 1];
        write_summary_row(csv, boundary.first, boundary.second, a);
        write_summary_row(csv, interior.first, interior.second, b);
        write_text(run.dir / ("seed" + std::to_string(seeds[k]) + "_boundary.json"),
                   report_json(a, bulk(boundary.first, boundary.second), seeds[k]));
        write_text(run.dir / ("seed" + std::to_string(seeds[k]) + "_bulk.json"),
                   report_json(b, bulk(interior.first, interior.second), seeds[k]));
        pass = pass && a.mle_spread > b.mle_spread;
        d += (k ? "; " : "") + std::string("seed ") + std::to_string(seeds[k]) + ": " +
             g6(a.mle_spread) + (a.mle_spread > b.mle_spread ? " > " : " <= ") +
             g6(b.mle_spread);
    }
    write_text(run.dir / "summary.csv", csv.str());
    return {pass, "mle_spread boundary vs bulk, " + d};
}

// 10 -----------------------------------------------------------------------

Outcome c10(const Run& run) {
    // (a) 3x3 corner block of the 20x20 midpoint grid.
    SweepConfig mini;
    mini.mu_x = {0.025, 0.275, 0.525};
    mini.mu_y = {0.475, 0.725, 0.975};
    mini.rows = mini.cols = 48;
    mini.plan.windows = diagonal_windows(48, 48, 2, 12);
    mini.plan.relax_iterates = 50'000;
    mini.plan.accumulate_iterates = 1000;
    mini.rng_seed = 1;
    mini.output_dir = (run.dir / "mini-sweep").string();
    fs::remove_all(mini.output_dir);
    const auto res = run_sweep(mini, {run.threads, std::nullopt});
    auto pp = [&](std::size_t ix, std::size_t iy) {
        const auto& r = res.at(ix, iy);
        return r.proportion_positive.value_or(std::nan(""));
    };
    const double corner = pp(0, 2);
    const bool drop = corner < pp(0, 1) && corner < pp(0, 0);
    std::string grid;
    for (std::size_t iy = 3; iy-- > 0;) {
        grid += iy == 2 ? "[" : " [";
        for (std::size_t ix = 0; ix < 3; ++ix) grid += (ix ? " " : "") + fmt("%.4f", pp(ix, iy));
        grid += "]";
    }

    // (b) two well separated clusters.
    std::vector<double> two;
    for (int k = 0; k < 50; ++k) {
        two.push_back(-1.0 + 0.004 * k);
        two.push_back(1.0 + 0.004 * k);
    }
    const double bc = bimodality(two);

    // Presets, one relax and one accumulate iterate at a single point.
    std::string smoke;
    bool smoke_ok = true;
    for (const char* name : {"desk", "paper-scale"}) {
        SweepConfig c = SweepConfig::preset(name);
        c.mu_x = {0.6};
        c.mu_y = {0.8};
        c.plan.relax_iterates = 1;
        c.plan.accumulate_iterates = 1;
        c.output_dir = (run.dir / (std::string("preset-") + name)).string();
        fs::remove_all(c.output_dir);
        const auto r = run_sweep(c, {run.threads, std::nullopt});
        const bool ok = r.records.size() == 1 && r.records[0].status == PointStatus::Ok;
        smoke_ok = smoke_ok && ok;
        smoke += std::string(smoke.empty() ? "" : ", ") + name + (ok ? " ok" : " failed");
    }

    return {drop && bc > 0.555 && smoke_ok,
            "prop_pos (mu_y desc, mu_x asc) " + grid + ", corner drop " + (drop ? "yes" : "no") +
                "; bimodality " + g6(bc) + "; presets " + smoke};
}

// 11 -----------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    if (!fs::exists(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), root).generic_string()] = ss.str();
    }
    return files;
}

Outcome c11(const Run& run) {
    const std::vector<std::pair<const char*, Outcome (*)(const Run&)>> replicas = {
        {"c06", c6}, {"c07", c7}, {"c08", c8}, {"c09", c9}};
    const Budget b = run.budget == Budget::Full ? Budget::Full : Budget::Reduced;
    const unsigned many = std::max(4u, run.threads);
    const std::vector<std::pair<std::string, unsigned>> passes = {
        {"t1_a", 1}, {"t1_b", 1}, {"tN", many}};

    fs::remove_all(run.dir);
    for (const auto& [name, threads] : passes) {
        for (const auto& [tag, fn] : replicas) fn({run.dir / name / tag, threads, b});
    }
    const auto ref = read_tree(run.dir / "t1_a");
    std::size_t mismatched = 0;
    for (const auto& [name, threads] : passes) {
        const auto other = read_tree(run.dir / name);
        if (other != ref) ++mismatched;
    }
    return {mismatched == 0 && !ref.empty(),
            std::to_string(ref.size()) + " files from " +
                (b == Budget::Full ? "full" : "reduced") +
                " replicas of 6-9; repeated run and " + std::to_string(many) +
                " threads vs 1: " + (mismatched == 0 ? "identical" : "DIFFERENT")};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)(const Run&);
};

const Criterion kCriteria[] = {
    {1, "local fixed point", c1},
    {2, "Jacobians vs finite differences", c2},
    {3, "cocycle reconstruction", c3},
    {4, "gingham fixed point", c4},
    {5, "tiled gingham is a lattice fixed point", c5},
    {6, "all-negative region", c6},
    {7, "chaotic bulk, full grid vs subgrid", c7},
    {8, "crystal regime ladder", c8},
    {9, "discrepancy contrast", c9},
    {10, "desk substitutes for full-scale runs", c10},
    {11, "determinism", c11},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria runner"};
    std::string out = "acceptance-out";
    unsigned threads = 0;
    std::vector<int> only;
    bool full = false;
    app.add_option("--out", out, "output directory");
    app.add_option("--threads", threads, "0 = SNB_THREADS or all cores");
    app.add_option("--only", only, "criterion numbers to run");
    app.add_flag("--full", full, "48x32 grid for criterion 7, full replicas for 11");
    CLI11_PARSE(app, argc, argv);

    const unsigned t = resolve_threads(threads);
    int failed = 0;
    for (const auto& c : kCriteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        char tag[8];
        std::snprintf(tag, sizeof tag, "c%02d", c.id);
        const Run run{fs::path(out) / tag, t, full ? Budget::Full : Budget::Standard};
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn(run);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s  %s: %s (%.1fs)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
