#include "hoops/logistic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "hoops/errors.hpp"
#include "hoops/kernels.hpp"

namespace hoops {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr double kHessianJitter = 1e-10;

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& eta) {
    Eigen::VectorXd p(eta.size());
    kernels::sigmoid(eta.data(), p.data(), static_cast<std::size_t>(eta.size()));
    return p;
}

double negloglik_sum(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    return kernels::bernoulli_negloglik(eta.data(), y.data(),
                                        static_cast<std::size_t>(eta.size()));
}

// (1/n) sum_i w_i x_i x_i^T + 2*lambda*diag(mask) + jitter
Eigen::MatrixXd weighted_normal_matrix(const SparseRowMatrix& X,
                                       const Eigen::VectorXd& w, double lambda,
                                       const std::vector<double>& mask) {
    const int d = static_cast<int>(X.cols());
    const double inv_n = 1.0 / static_cast<double>(X.rows());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);

    std::vector<int> cols;
    std::vector<double> vals;
    for (int i = 0; i < X.outerSize(); ++i) {
        cols.clear();
        vals.clear();
        for (SparseRowMatrix::InnerIterator it(X, i); it; ++it) {
            cols.push_back(static_cast<int>(it.col()));
            vals.push_back(it.value());
        }
        const double wi = w[i] * inv_n;
        for (std::size_t a = 0; a < cols.size(); ++a) {
            const double wa = wi * vals[a];
            for (std::size_t b = 0; b <= a; ++b)
                H(cols[a], cols[b]) += wa * vals[b];
        }
    }
    H = H.selfadjointView<Eigen::Lower>();
    for (int j = 0; j < d; ++j) H(j, j) += 2.0 * lambda * mask[j] + kHessianJitter;
    return H;
}

SparseRowMatrix subset_rows(const SparseRowMatrix& X, const std::vector<int>& rows) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (SparseRowMatrix::InnerIterator it(X, rows[r]); it; ++it)
            trip.emplace_back(static_cast<int>(r), static_cast<int>(it.col()),
                              it.value());
    SparseRowMatrix out(static_cast<int>(rows.size()), X.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

Eigen::VectorXd subset_vec(const Eigen::VectorXd& v, const std::vector<int>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = v[rows[r]];
    return out;
}

// Runs fn(f) for every fold index, possibly on worker threads. Results must be
// written to per-fold slots so scheduling cannot affect the reduction order.
void for_each_fold(int folds, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, folds));
    if (threads == 1) {
        for (int f = 0; f < folds; ++f) fn(f);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                int f = next.fetch_add(1);
                if (f >= folds) return;
                try {
                    fn(f);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

double penalized_objective(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                           double lambda, const std::vector<double>& penalty_mask,
                           const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    double nll = negloglik_sum(eta, y) / static_cast<double>(X.rows());
    double pen = 0.0;
    for (int j = 0; j < beta.size(); ++j) pen += penalty_mask[j] * beta[j] * beta[j];
    return nll + lambda * pen;
}

Eigen::VectorXd penalized_gradient(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                                   double lambda, const std::vector<double>& penalty_mask,
                                   const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd r = sigmoid_vec(eta) - y;
    Eigen::VectorXd g = (X.transpose() * r) / static_cast<double>(X.rows());
    for (int j = 0; j < beta.size(); ++j) g[j] += 2.0 * lambda * penalty_mask[j] * beta[j];
    return g;
}

LogisticResult fit_logistic(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                            double lambda, const std::vector<double>& penalty_mask,
                            const Eigen::VectorXd* warm_start,
                            const LogisticOptions& opts) {
    if (lambda < 0.0) throw InvalidInputError("fit_logistic: lambda must be >= 0");
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n == 0) throw InvalidInputError("fit_logistic: empty design");
    const double inv_n = 1.0 / static_cast<double>(n);
    const bool use_newton = d <= opts.newton_max_cols;

    LogisticResult res;
    res.beta = warm_start != nullptr ? *warm_start : Eigen::VectorXd::Zero(d);

    double f = penalized_objective(X, y, lambda, penalty_mask, res.beta);
    res.objective_history.push_back(f);
    double grad_norm = 0.0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        Eigen::VectorXd eta = X * res.beta;
        Eigen::VectorXd p = sigmoid_vec(eta);
        Eigen::VectorXd g = (X.transpose() * (p - y)) * inv_n;
        for (int j = 0; j < d; ++j) g[j] += 2.0 * lambda * penalty_mask[j] * res.beta[j];
        grad_norm = g.lpNorm<Eigen::Infinity>();
        if (grad_norm < opts.grad_tol) {
            res.iterations = iter;
            res.objective = f;
            return res;
        }

        Eigen::VectorXd direction;
        if (use_newton) {
            Eigen::VectorXd w(n);
            kernels::logistic_weights(p.data(), w.data(), static_cast<std::size_t>(n));
            Eigen::MatrixXd H = weighted_normal_matrix(X, w, lambda, penalty_mask);
            Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
            direction = ldlt.solve(-g);
            if (!direction.allFinite() || g.dot(direction) >= 0.0) direction = -g;
        } else {
            direction = -g;  // wide design: first-order update
        }

        // step halving until sufficient decrease
        const double slope = g.dot(direction);
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            Eigen::VectorXd cand = res.beta + step * direction;
            double fc = penalized_objective(X, y, lambda, penalty_mask, cand);
            if (std::isfinite(fc) && fc <= f + kArmijoC1 * step * slope) {
                res.beta = std::move(cand);
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted && !direction.isApprox(-g)) {
            // retry along the raw gradient
            const double gslope = -g.squaredNorm();
            step = 1.0;
            for (int h = 0; h <= kMaxHalvings; ++h) {
                Eigen::VectorXd cand = res.beta - step * g;
                double fc = penalized_objective(X, y, lambda, penalty_mask, cand);
                if (std::isfinite(fc) && fc <= f + kArmijoC1 * step * gslope) {
                    res.beta = std::move(cand);
                    f = fc;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if (!accepted)
            throw ConvergenceError(
                "fit_logistic: no descent step found (gradient max-norm " +
                    std::to_string(grad_norm) + ")",
                grad_norm);
        res.objective_history.push_back(f);
    }
    throw ConvergenceError("fit_logistic: not converged after " +
                               std::to_string(opts.max_iter) +
                               " iterations (gradient max-norm " +
                               std::to_string(grad_norm) + ")",
                           grad_norm);
}

ModelFit fit_contextual_model(const DesignMatrix& design, const Eigen::VectorXd& y,
                              double lambda) {
    if (lambda < 0.0)
        throw InvalidInputError("fit_contextual_model: lambda must be >= 0");
    LogisticResult res = fit_logistic(design.matrix, y, lambda, design.penalty_mask);

    // back to the original covariate scale
    Eigen::VectorXd beta = res.beta;
    double intercept_shift = 0.0;
    for (const auto& g : design.groups) {
        if (!g.continuous) continue;
        const auto& t = design.transforms[g.offset];
        intercept_shift += beta[g.offset] * t.mean / t.scale;
        beta[g.offset] /= t.scale;
    }
    if (const auto* g = design.find_group("intercept"))
        beta[g->offset] -= intercept_shift;

    ModelFit fit;
    fit.fit_kind = "logistic";
    fit.lambda = lambda;
    fit.n_obs = design.rows();
    {
        Eigen::VectorXd eta = design.matrix * res.beta;
        fit.mean_log_likelihood = -negloglik_sum(eta, y) / static_cast<double>(design.rows());
    }
    for (const auto& g : design.groups) {
        ModelFit::Group out;
        out.name = g.name;
        out.levels = g.levels;
        out.values.resize(g.levels.size());
        for (int i = 0; i < g.size(); ++i) out.values[i] = beta[g.offset + i];
        fit.groups.push_back(std::move(out));
    }
    return fit;
}

std::vector<double> make_lambda_grid(double lo, double hi, int count) {
    if (count < 1 || lo <= 0.0 || hi < lo)
        throw InvalidInputError("make_lambda_grid: need 0 < lo <= hi and count >= 1");
    std::vector<double> grid;
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) grid.push_back(std::exp(std::log(lo) + i * step));
    return grid;
}

std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
    if (folds < 2 || folds > n)
        throw InvalidInputError("fold_assignment: need 2 <= folds <= n");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> fold(n);
    for (int k = 0; k < n; ++k) fold[perm[k]] = k % folds;
    return fold;
}

double select_lambda(const DesignMatrix& design, const Eigen::VectorXd& y,
                     const std::vector<double>& grid, int folds, std::uint64_t seed,
                     int threads) {
    if (grid.empty()) throw InvalidInputError("select_lambda: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw InvalidInputError("select_lambda: grid must be ascending");
    const int n = design.rows();
    auto fold = fold_assignment(n, folds, seed);

    // held-out summed log-likelihood per (fold, lambda)
    std::vector<std::vector<double>> ll(folds, std::vector<double>(grid.size(), 0.0));

    for_each_fold(folds, threads, [&](int f) {
        std::vector<int> train, test;
        for (int i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
        SparseRowMatrix Xtr = subset_rows(design.matrix, train);
        SparseRowMatrix Xte = subset_rows(design.matrix, test);
        Eigen::VectorXd ytr = subset_vec(y, train);
        Eigen::VectorXd yte = subset_vec(y, test);

        Eigen::VectorXd warm = Eigen::VectorXd::Zero(design.cols());
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            LogisticResult r =
                fit_logistic(Xtr, ytr, grid[gi], design.penalty_mask, &warm);
            warm = r.beta;
            Eigen::VectorXd eta = Xte * r.beta;
            ll[f][gi] = -negloglik_sum(eta, yte);
        }
    });

    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double total = 0.0;
        for (int f = 0; f < folds; ++f) total += ll[f][gi];
        if (total > best_ll) {  // strict: ties keep the smaller lambda
            best_ll = total;
            best = gi;
        }
    }
    return grid[best];
}

CvMetrics cross_validate(const std::vector<PotentialAssist>& pas, ModelSpec spec,
                         int folds, std::uint64_t seed, double lambda, int threads) {
    auto [design, y] = build_contextual_design(pas, spec);
    const int n = design.rows();
    auto fold = fold_assignment(n, folds, seed);

    std::vector<double> ll(folds, 0.0);
    std::vector<long> wrong(folds, 0);

    for_each_fold(folds, threads, [&](int f) {
        std::vector<int> train, test;
        for (int i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
        SparseRowMatrix Xtr = subset_rows(design.matrix, train);
        SparseRowMatrix Xte = subset_rows(design.matrix, test);
        Eigen::VectorXd ytr = subset_vec(y, train);
        Eigen::VectorXd yte = subset_vec(y, test);

        LogisticResult r = fit_logistic(Xtr, ytr, lambda, design.penalty_mask);
        Eigen::VectorXd eta = Xte * r.beta;
        ll[f] = -negloglik_sum(eta, yte);
        long w = 0;
        for (int i = 0; i < eta.size(); ++i) {
            bool predicted = eta[i] >= 0.0;  // p >= 0.5
            if (predicted != (yte[i] > 0.5)) ++w;
        }
        wrong[f] = w;
    });

    CvMetrics m;
    double total_ll = 0.0;
    long total_wrong = 0;
    for (int f = 0; f < folds; ++f) {
        total_ll += ll[f];
        total_wrong += wrong[f];
    }
    m.mean_log_likelihood = total_ll / static_cast<double>(n);
    m.misclassification = static_cast<double>(total_wrong) / static_cast<double>(n);
    return m;
}

}  // namespace hoops
