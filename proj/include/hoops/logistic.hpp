#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "hoops/design.hpp"
#include "hoops/model_fit.hpp"
#include "hoops/types.hpp"

namespace hoops {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Penalized average negative log-likelihood:
//   f(beta) = (1/N) sum_j [ log(1 + e^eta_j) - y_j eta_j ] + lambda * ||beta_pen||^2
// The intercept is excluded from the penalty via the mask.
double penalized_objective(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                           double lambda, const std::vector<double>& penalty_mask,
                           const Eigen::VectorXd& beta);
Eigen::VectorXd penalized_gradient(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                                   double lambda, const std::vector<double>& penalty_mask,
                                   const Eigen::VectorXd& beta);

struct LogisticResult {
    Eigen::VectorXd beta;  // on the design's (standardized) scale
    int iterations = 0;
    double objective = 0.0;
    std::vector<double> objective_history;  // one entry per accepted iterate
};

struct LogisticOptions {
    double grad_tol = 1e-8;  // max-norm convergence threshold
    int max_iter = 500;
    int newton_max_cols = 2048;  // beyond this, first-order updates only
};

// IRLS (damped Newton with step halving, gradient fallback). Throws
// ConvergenceError carrying the gradient norm when the tolerance is not met.
LogisticResult fit_logistic(const SparseRowMatrix& X, const Eigen::VectorXd& y,
                            double lambda, const std::vector<double>& penalty_mask,
                            const Eigen::VectorXd* warm_start = nullptr,
                            const LogisticOptions& opts = {});

// Full contextual fit; coefficients reported on the original covariate scale.
ModelFit fit_contextual_model(const DesignMatrix& design, const Eigen::VectorXd& y,
                              double lambda);

// `count` log-spaced values in [lo, hi].
std::vector<double> make_lambda_grid(double lo, double hi, int count);

// Seeded deterministic permutation split; fold of observation i in [0, folds).
std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed);

// Grid value maximizing mean held-out log-likelihood; ties go to the smaller
// lambda. Grid must be nonempty and ascending.
double select_lambda(const DesignMatrix& design, const Eigen::VectorXd& y,
                     const std::vector<double>& grid, int folds, std::uint64_t seed,
                     int threads = 1);

struct CvMetrics {
    double mean_log_likelihood = 0.0;  // per held-out observation
    double misclassification = 0.0;    // cutoff p = 0.5
};

// K-fold validation of a model spec over the potential-assist table.
CvMetrics cross_validate(const std::vector<PotentialAssist>& pas, ModelSpec spec,
                         int folds, std::uint64_t seed, double lambda,
                         int threads = 1);

}  // namespace hoops
