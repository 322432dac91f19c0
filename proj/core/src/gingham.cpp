#include "snb/gingham.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "json.hpp"
#include "snb/errors.hpp"
#include "snb/nb_core.hpp"
#include "snb/parallel.hpp"
#include "snb/spectrum_io.hpp"

namespace snb {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// Pre-diffusion values of the three classes.
struct Mapped {
    std::array<CellState, 3> tilde;
    std::array<Mat2, 3> local;
};

Mapped map_classes(const Vec6& v, double lambda) {
    Mapped m;
    for (int k = 0; k < 3; ++k) {
        nb_map_and_jacobian({v[2 * k], v[2 * k + 1]}, lambda, m.tilde[k], m.local[k]);
    }
    return m;
}

double mix_weight(int row, int col, double mu) {
    return (row == col ? 1.0 - mu : 0.0) + kGinghamWeights[row][col] * mu;
}

Vec6 apply_map(const Vec6& v, const ModelParams& p) {
    const Mapped m = map_classes(v, p.lambda);
    Vec6 out;
    for (int i = 0; i < 3; ++i) {
        double x = 0.0;
        double y = 0.0;
        for (int j = 0; j < 3; ++j) {
            x += mix_weight(i, j, p.mu_x) * m.tilde[j].x;
            y += mix_weight(i, j, p.mu_y) * m.tilde[j].y;
        }
        out[2 * i] = x;
        out[2 * i + 1] = y;
    }
    return out;
}

Mat6 jacobian_of(const Vec6& v, const ModelParams& p) {
    const Mapped m = map_classes(v, p.lambda);
    Mat6 jac;
    for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 2; ++a) {
            const double mu = a == 0 ? p.mu_x : p.mu_y;
            for (int j = 0; j < 3; ++j) {
                const double w = mix_weight(i, j, mu);
                for (int b = 0; b < 2; ++b) jac(2 * i + a, 2 * j + b) = w * m.local[j][2 * a + b];
            }
        }
    }
    return jac;
}

double residual_of(const Vec6& v, const ModelParams& p) {
    return (apply_map(v, p) - v).cwiseAbs().maxCoeff();
}

}  // namespace

GinghamState GinghamState::symmetric(double lambda) {
    const CellState fp = nb_fixed_point(lambda);
    return {fp.x, fp.y, fp.x, fp.y, fp.x, fp.y};
}

GinghamState gingham_map(const GinghamState& s, const ModelParams& params) {
    const Vec6 out = apply_map(s.vector(), params);
    for (int k = 0; k < 6; ++k) {
        if (!(out[k] <= kOverflowThreshold)) {
            throw OverflowError("gingham_map: population overflow", -1, -1, 0);
        }
    }
    return GinghamState::from_vector(out);
}

Mat6 gingham_jacobian(const GinghamState& s, const ModelParams& params) {
    return jacobian_of(s.vector(), params);
}

GinghamState crystal_seed(double lambda) {
    const CellState fp = nb_fixed_point(lambda);
    return {10.0 * fp.x, fp.y, 0.5 * fp.x, 4.0 * fp.y, 0.5 * fp.x, 2.0 * fp.y};
}

double asymmetry(const GinghamState& s) {
    return std::max(std::abs(s.x_a - s.x_b), std::abs(s.y_a - s.y_b));
}

FixedPointResult evaluate_fixed_point(const GinghamState& point, const ModelParams& params) {
    FixedPointResult r;
    r.point = point;
    const Vec6 v = point.vector();
    r.residual = residual_of(v, params);
    Eigen::EigenSolver<Mat6> es(jacobian_of(v, params), false);
    for (int k = 0; k < 6; ++k) r.eigenvalue_moduli[k] = std::abs(es.eigenvalues()[k]);
    std::sort(r.eigenvalue_moduli.begin(), r.eigenvalue_moduli.end());
    r.stable = r.eigenvalue_moduli.back() < 1.0;
    return r;
}

FixedPointResult find_fixed_point(const GinghamState& initial, const ModelParams& params,
                                  const NewtonOptions& options) {
    params.validate();
    Vec6 s = initial.vector();
    for (int k = 0; k < 6; ++k) {
        if (!std::isfinite(s[k]) || s[k] < 0.0) {
            throw DomainError("find_fixed_point: initial state must be finite and non-negative");
        }
    }
    auto finish = [&](const Vec6& v, std::size_t it) {
        FixedPointResult r = evaluate_fixed_point(GinghamState::from_vector(v), params);
        r.iterations = it;
        return r;
    };
    if (residual_of(s, params) < options.tolerance) return finish(s, 0);

    // Log coordinates keep every iterate strictly positive.
    Vec6 u = s.cwiseMax(1e-12).array().log().matrix();
    auto merit = [&](const Vec6& uu) {
        const Vec6 v = uu.array().exp().matrix();
        const double m = (apply_map(v, params) - v).norm();
        return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
    };

    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        const Vec6 v = u.array().exp().matrix();
        const Vec6 f = apply_map(v, params) - v;
        const Mat6 ju = (jacobian_of(v, params) - Mat6::Identity()) * v.asDiagonal();
        Eigen::FullPivLU<Mat6> lu(ju);
        if (!lu.isInvertible()) {
            throw SingularJacobianError("find_fixed_point: singular Newton system at iteration " +
                                        std::to_string(it));
        }
        const Vec6 step = lu.solve(-f);
        if (!step.allFinite()) {
            throw SingularJacobianError("find_fixed_point: non-finite Newton step");
        }

        const double m0 = f.norm();
        double t = 1.0;
        Vec6 next = u + step;
        while (!(merit(next) < (1.0 - 1e-4 * t) * m0)) {
            t *= 0.5;
            if (t < 1e-12) {
                throw NoConvergenceError("find_fixed_point: line search stalled at iteration " +
                                         std::to_string(it));
            }
            next = u + t * step;
        }
        u = next;
        const Vec6 nv = u.array().exp().matrix();
        if (residual_of(nv, params) < options.tolerance) return finish(nv, it);
    }
    throw NoConvergenceError("find_fixed_point: no convergence after " +
                             std::to_string(options.max_iter) + " iterations");
}

// Curve tracing ---------------------------------------------------------------

namespace {

struct BranchPoint {
    double mu_y = 0.0;
    std::optional<FixedPointResult> solution;
};

std::optional<FixedPointResult> try_asymmetric(const GinghamState& seed, const ModelParams& p,
                                               double threshold) {
    try {
        auto r = find_fixed_point(seed, p, {});
        // Only interior solutions count; with weak coupling Newton can drift
        // onto points where one class has died out.
        const double floor = 1e-9 * nb_fixed_point(p.lambda).x;
        if (asymmetry(r.point) > threshold && r.point.vector().minCoeff() > floor) return r;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// Scans mu_y on a grid, continuing the asymmetric branch from each solved
// neighbor (downward pass, then upward pass). The crystal seed restarts the
// branch wherever continuation has nothing to start from.
std::vector<BranchPoint> scan_branch(double lambda, double mu_x, const CurveOptions& o) {
    const auto steps =
        static_cast<std::size_t>(std::llround((o.mu_y_max - o.mu_y_min) / o.scan_step));
    std::vector<BranchPoint> grid(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        grid[k].mu_y = o.mu_y_min + (o.mu_y_max - o.mu_y_min) * static_cast<double>(k) /
                                        static_cast<double>(steps);
    }
    const GinghamState crystal = crystal_seed(lambda);
    auto params_at = [&](double mu_y) {
        return ModelParams{lambda, mu_x, mu_y, Neighborhood::EightCell, Boundary::Toroidal};
    };

    for (std::size_t k = steps + 1; k-- > 0;) {
        const ModelParams p = params_at(grid[k].mu_y);
        if (k < steps && grid[k + 1].solution) {
            grid[k].solution = try_asymmetric(grid[k + 1].solution->point, p, o.asymmetry_threshold);
        }
        if (!grid[k].solution) grid[k].solution = try_asymmetric(crystal, p, o.asymmetry_threshold);
    }
    for (std::size_t k = 1; k <= steps; ++k) {
        if (grid[k].solution || !grid[k - 1].solution) continue;
        grid[k].solution = try_asymmetric(grid[k - 1].solution->point, params_at(grid[k].mu_y),
                                          o.asymmetry_threshold);
    }
    return grid;
}

// Bisects between lo (predicate false) and hi (predicate true), continuing
// the branch from the most recent solution on the true side.
template <class Pred>
double bisect(double lambda, double mu_x, double lo, double hi, FixedPointResult hi_solution,
              const CurveOptions& o, Pred&& pred) {
    while (std::abs(hi - lo) > o.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const ModelParams p{lambda, mu_x, mid, Neighborhood::EightCell, Boundary::Toroidal};
        auto sol = try_asymmetric(hi_solution.point, p, o.asymmetry_threshold);
        if (sol && pred(*sol)) {
            hi = mid;
            hi_solution = *sol;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_options(const CurveOptions& o) {
    if (!(o.mu_y_min >= 0.0 && o.mu_y_max <= 1.0 && o.mu_y_min < o.mu_y_max)) {
        throw DomainError("curve tracing: mu_y range must lie inside [0, 1]");
    }
    if (!(o.mu_x_min >= 0.0 && o.mu_x_max <= 1.0 && o.mu_x_min <= o.mu_x_max)) {
        throw DomainError("curve tracing: mu_x range must lie inside [0, 1]");
    }
    if (!(o.scan_step > 0.0) || !(o.tolerance > 0.0) || !(o.resolution > 0.0)) {
        throw DomainError("curve tracing: steps and tolerances must be positive");
    }
}

std::vector<double> mu_x_samples(const CurveOptions& o) {
    const auto n = static_cast<std::size_t>(std::floor((o.mu_x_max - o.mu_x_min) / o.resolution + 1e-9));
    std::vector<double> out;
    for (std::size_t k = 0; k <= n; ++k) {
        out.push_back(o.mu_x_min + o.resolution * static_cast<double>(k));
    }
    return out;
}

template <class Single>
std::vector<CurveSample> trace(double lambda, const CurveOptions& o, unsigned threads,
                               Single&& single) {
    check_options(o);
    const auto xs = mu_x_samples(o);
    std::vector<CurveSample> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        CurveSample& s = out[i];
        s.mu_x = xs[i];
        try {
            s.mu_y = single(lambda, s.mu_x, o);
            s.bracketed = true;
        } catch (const CurveNotBracketedError& e) {
            s.error = e.what();
        }
    });
    return out;
}

std::string not_bracketed(const char* what, double mu_x) {
    return std::string(what) + ": no transition in mu_y range at mu_x = " + format_double(mu_x);
}

}  // namespace

double pitchfork_mu_y(double lambda, double mu_x, const CurveOptions& o) {
    check_options(o);
    const auto grid = scan_branch(lambda, mu_x, o);
    // Lowest grid point on the branch; the point below it must lack one.
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid[k].solution) continue;
        if (k == 0) break;
        return bisect(lambda, mu_x, grid[k - 1].mu_y, grid[k].mu_y, *grid[k].solution, o,
                      [](const FixedPointResult&) { return true; });
    }
    throw CurveNotBracketedError(not_bracketed("pitchfork", mu_x), mu_x);
}

double stability_mu_y(double lambda, double mu_x, const CurveOptions& o) {
    check_options(o);
    const auto grid = scan_branch(lambda, mu_x, o);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const auto& lo = grid[k - 1].solution;
        const auto& hi = grid[k].solution;
        if (!lo || !hi || lo->stable || !hi->stable) continue;
        return bisect(lambda, mu_x, grid[k - 1].mu_y, grid[k].mu_y, *hi, o,
                      [](const FixedPointResult& r) { return r.stable; });
    }
    throw CurveNotBracketedError(not_bracketed("stability", mu_x), mu_x);
}

std::vector<CurveSample> trace_pitchfork_curve(double lambda, const CurveOptions& options,
                                               unsigned threads) {
    return trace(lambda, options, threads, pitchfork_mu_y);
}

std::vector<CurveSample> trace_stability_curve(double lambda, const CurveOptions& options,
                                               unsigned threads) {
    return trace(lambda, options, threads, stability_mu_y);
}

FixedPointResult asymmetric_branch_point(double lambda, double mu_x, double mu_y,
                                         const CurveOptions& options) {
    CurveOptions o = options;
    o.mu_y_min = mu_y;
    check_options(o);
    const auto grid = scan_branch(lambda, mu_x, o);
    if (!grid.front().solution) {
        throw NoConvergenceError("no asymmetric fixed point at mu_y = " + format_double(mu_y));
    }
    return *grid.front().solution;
}

void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& pitchfork,
                      const std::vector<CurveSample>& stability) {
    out << "mu_x,mu_y,curve\n";
    for (const auto& s : pitchfork) {
        if (s.bracketed) out << format_double(s.mu_x) << ',' << format_double(s.mu_y) << ",pitchfork\n";
    }
    for (const auto& s : stability) {
        if (s.bracketed) out << format_double(s.mu_x) << ',' << format_double(s.mu_y) << ",stability\n";
    }
}

std::string fixed_point_json(const FixedPointResult& r, const ModelParams& params) {
    nlohmann::ordered_json j;
    j["params"] = nlohmann::ordered_json::parse(params_json(params));
    j["point"] = {{"x_a", r.point.x_a}, {"y_a", r.point.y_a}, {"x_b", r.point.x_b},
                  {"y_b", r.point.y_b}, {"x_c", r.point.x_c}, {"y_c", r.point.y_c}};
    j["residual"] = r.residual;
    j["eigenvalue_moduli"] = r.eigenvalue_moduli;
    j["stable"] = r.stable;
    j["iterations"] = r.iterations;
    return j.dump(2);
}

LatticeState tile_gingham(const GinghamState& s, std::size_t rows, std::size_t cols) {
    if (rows % 2 != 0 || cols % 2 != 0) {
        throw DomainError("tile_gingham: lattice dimensions must be even");
    }
    LatticeState out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const bool er = r % 2 == 0;
            const bool ec = c % 2 == 0;
            out.at(r, c) = er && ec     ? CellState{s.x_a, s.y_a}
                           : !er && !ec ? CellState{s.x_b, s.y_b}
                                        : CellState{s.x_c, s.y_c};
        }
    }
    return out;
}

}  // namespace snb
