#include "snb/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "snb/errors.hpp"
#include "snb/parallel.hpp"

namespace snb {

void SubgridSpec::validate(std::size_t lattice_rows, std::size_t lattice_cols,
                           Boundary boundary) const {
    if (rows == 0 || cols == 0) throw DomainError("subgrid window must be non-empty");
    if (rows > lattice_rows || cols > lattice_cols) {
        throw DomainError("subgrid window larger than lattice");
    }
    if (boundary == Boundary::Toroidal) {
        if (row_offset >= lattice_rows || col_offset >= lattice_cols) {
            throw DomainError("subgrid offset outside lattice");
        }
    } else if (row_offset + rows > lattice_rows || col_offset + cols > lattice_cols) {
        throw DomainError("subgrid window does not fit a non-wrapping lattice");
    }
}

std::vector<std::size_t> SubgridSpec::lattice_cells(std::size_t lattice_rows,
                                                    std::size_t lattice_cols) const {
    std::vector<std::size_t> out;
    out.reserve(cells());
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t lr = (row_offset + r) % lattice_rows;
        for (std::size_t c = 0; c < cols; ++c) {
            out.push_back(lr * lattice_cols + (col_offset + c) % lattice_cols);
        }
    }
    return out;
}

SubgridJacobian::SubgridJacobian(std::size_t lattice_rows, std::size_t lattice_cols,
                                 const ModelParams& params, const SubgridSpec& spec)
    : params_(params), spec_(spec) {
    params_.validate();
    spec_.validate(lattice_rows, lattice_cols, params.boundary);
    const DiffusionStencil stencil(lattice_rows, lattice_cols, params.neighborhood,
                                   params.boundary);
    cells_ = spec_.lattice_cells(lattice_rows, lattice_cols);

    std::vector<std::int64_t> to_window(lattice_rows * lattice_cols, -1);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        to_window[cells_[i]] = static_cast<std::int64_t>(i);
    }

    link_ptr_.reserve(cells_.size() + 1);
    link_ptr_.push_back(0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const std::size_t li = cells_[i];
        for (std::size_t k = stencil.begin(li); k < stencil.end(li); ++k) {
            const auto nj = stencil.neighbor(k);
            const auto wj = to_window[nj];
            if (wj >= 0) links_.push_back({static_cast<std::uint32_t>(wj), nj});
        }
        link_ptr_.push_back(links_.size());
        divisor_.push_back(stencil.divisor(li));
    }
}

void SubgridJacobian::assemble(const LatticeState& state, SparseMatrix& out) const {
    const std::size_t n = cells_.size();
    std::vector<Mat2> local(n);
    for (std::size_t i = 0; i < n; ++i) {
        local[i] = nb_jacobian(state.cells[cells_[i]], params_.lambda);
    }

    const double self_w[2] = {1.0 - params_.mu_x, 1.0 - params_.mu_y};
    const double mu[2] = {params_.mu_x, params_.mu_y};

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(4 * (n + links_.size()));
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            const auto row = static_cast<int>(2 * i + a);
            for (int b = 0; b < 2; ++b) {
                const double v = self_w[a] * local[i][2 * a + b];
                triplets.emplace_back(row, static_cast<int>(2 * i + b), v);
            }
            const double w = mu[a] / divisor_[i];
            for (std::size_t k = link_ptr_[i]; k < link_ptr_[i + 1]; ++k) {
                const std::size_t j = links_[k].window_col;
                for (int b = 0; b < 2; ++b) {
                    triplets.emplace_back(row, static_cast<int>(2 * j + b),
                                          w * local[j][2 * a + b]);
                }
            }
        }
    }
    out.resize(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
    out.setFromTriplets(triplets.begin(), triplets.end());
}

SparseMatrix SubgridJacobian::assemble(const LatticeState& state) const {
    SparseMatrix m;
    assemble(state, m);
    return m;
}

SparseMatrix assemble_full_jacobian(const LatticeState& state, const ModelParams& params) {
    state.validate();
    return SubgridJacobian(state.rows, state.cols, params, full_window(state)).assemble(state);
}

SparseMatrix assemble_subgrid_jacobian(const LatticeState& state, const ModelParams& params,
                                       const SubgridSpec& spec) {
    state.validate();
    return SubgridJacobian(state.rows, state.cols, params, spec).assemble(state);
}

LyapunovSpectrum LyapunovSpectrum::from_exponents(std::vector<double> exponents,
                                                  std::uint64_t iterates) {
    LyapunovSpectrum s;
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    s.exponents = std::move(exponents);
    s.iterates = iterates;
    if (!s.exponents.empty()) {
        const auto n = static_cast<double>(s.exponents.size());
        s.mle = s.exponents.front();
        s.proportion_positive =
            static_cast<double>(std::count_if(s.exponents.begin(), s.exponents.end(),
                                              [](double v) { return v > 0.0; })) /
            n;
        s.mean = std::accumulate(s.exponents.begin(), s.exponents.end(), 0.0) / n;
    }
    return s;
}

CocycleAccumulator::CocycleAccumulator(std::size_t dim) {
    if (dim == 0) throw DomainError("accumulator dimension must be positive");
    const auto n = static_cast<Eigen::Index>(dim);
    q_ = Eigen::MatrixXd::Identity(n, n);
    log_sums_ = Eigen::VectorXd::Zero(n);
}

void CocycleAccumulator::accumulate(const Eigen::MatrixXd& jacobian) {
    if (jacobian.rows() != q_.rows() || jacobian.cols() != q_.rows()) {
        throw DomainError("jacobian dimension does not match accumulator");
    }
    b_.noalias() = jacobian * q_;
    factor_and_update();
}

void CocycleAccumulator::accumulate(const SparseMatrix& jacobian) {
    if (jacobian.rows() != q_.rows() || jacobian.cols() != q_.rows()) {
        throw DomainError("jacobian dimension does not match accumulator");
    }
    b_.noalias() = jacobian * q_;
    factor_and_update();
}

void CocycleAccumulator::factor_and_update() {
    if (poisoned_) {
        throw SingularFactorError("accumulator is poisoned", iterates_);
    }
    const Eigen::Index n = q_.rows();
    Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(b_);
    r_ = qr.matrixQR().triangularView<Eigen::Upper>();
    q_ = qr.householderQ();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (r_(k, k) < 0.0) {
            r_.row(k) *= -1.0;
            q_.col(k) *= -1.0;
        }
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d = r_(k, k);
        if (!(d >= 1e-300) || !std::isfinite(d)) {
            poisoned_ = true;
            throw SingularFactorError("QR factor lost rank at iterate " +
                                          std::to_string(iterates_ + 1) + " (index " +
                                          std::to_string(k) + ")",
                                      iterates_ + 1);
        }
    }
    for (Eigen::Index k = 0; k < n; ++k) log_sums_[k] += std::log(r_(k, k));
    ++iterates_;
}

double CocycleAccumulator::orthogonality_error() const {
    const Eigen::Index n = q_.rows();
    return (q_.transpose() * q_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

LyapunovSpectrum spectrum(const CocycleAccumulator& acc) {
    if (acc.iterates() == 0) throw EmptyAccumulatorError("no iterates accumulated");
    std::vector<double> ex(acc.dim());
    const auto n = static_cast<double>(acc.iterates());
    for (std::size_t k = 0; k < ex.size(); ++k) {
        ex[k] = acc.log_diag_sums()[static_cast<Eigen::Index>(k)] / n;
    }
    return LyapunovSpectrum::from_exponents(std::move(ex), acc.iterates());
}

SpectrumRun run_spectra(const LatticeState& state, const ModelParams& params,
                        const std::vector<SubgridSpec>& windows, std::uint64_t iterates,
                        std::uint64_t checkpoint_every, unsigned threads) {
    state.validate();
    params.validate();

    std::vector<SubgridJacobian> assemblers;
    assemblers.reserve(windows.size());
    for (const auto& w : windows) assemblers.emplace_back(state.rows, state.cols, params, w);

    SpectrumRun run{{}, state};
    run.windows.reserve(windows.size());
    for (const auto& w : windows) run.windows.push_back({w, CocycleAccumulator(w.dim()), {}, {}});

    std::vector<SparseMatrix> jac(windows.size());
    LatticeStepper stepper(state.rows, state.cols, params);
    LatticeState& s = run.final_state;

    for (std::uint64_t t = 0; t < iterates; ++t) {
        parallel_for(windows.size(), threads, [&](std::size_t w) {
            WindowRun& wr = run.windows[w];
            if (wr.error) return;
            assemblers[w].assemble(s, jac[w]);
            try {
                wr.accumulator.accumulate(jac[w]);
            } catch (const SingularFactorError& e) {
                wr.error = e.what();
            }
        });
        stepper.advance(s);
        if (checkpoint_every > 0 && (t + 1) % checkpoint_every == 0) {
            for (auto& wr : run.windows) {
                if (wr.error) continue;
                const auto sp = wr.spectrum();
                wr.trace.push_back({t + 1, sp.mle, sp.proportion_positive, sp.mean});
            }
        }
    }
    return run;
}

SingleSpectrumRun run_spectrum(const LatticeState& state, const ModelParams& params,
                               const SubgridSpec& spec, std::uint64_t iterates,
                               std::uint64_t checkpoint_every) {
    auto run = run_spectra(state, params, {spec}, iterates, checkpoint_every, 1);
    WindowRun& w = run.windows.front();
    if (w.error) throw SingularFactorError(*w.error, w.accumulator.iterates() + 1);
    return {std::move(w.accumulator), std::move(w.trace), std::move(run.final_state)};
}

}  // namespace snb
