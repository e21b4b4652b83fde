#include "hoops/linear.hpp"

#include <algorithm>

#include "hoops/errors.hpp"

namespace hoops {

namespace {

// Linear dependencies baked into the team design: team, opponent and
// sk_generosity each sum to the intercept column; sk_bias sums to home.
int design_redundancy(const DesignMatrix& d) {
    int r = 0;
    if (d.find_group("team")) ++r;
    if (d.find_group("opponent")) ++r;
    if (d.find_group("sk_generosity")) ++r;
    if (d.find_group("sk_bias")) ++r;
    return r;
}

}  // namespace

Eigen::VectorXd team_model_coefficients(const DesignMatrix& design,
                                        const Eigen::VectorXd& y) {
    const int identifiable = design.cols() - design_redundancy(design);
    if (design.rows() < identifiable)
        throw InvalidInputError("fit_team_model: underdetermined (" +
                                std::to_string(design.rows()) + " observations, " +
                                std::to_string(identifiable) + " identifiable columns)");
    Eigen::MatrixXd X = Eigen::MatrixXd(design.matrix);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
    return cod.solve(y);
}

ModelFit fit_team_model(const DesignMatrix& design, const Eigen::VectorXd& y) {
    Eigen::VectorXd beta = team_model_coefficients(design, y);
    Eigen::VectorXd fitted = design.matrix * beta;

    const double mean = y.mean();
    const double sst = (y.array() - mean).square().sum();
    const double ssr = (y - fitted).squaredNorm();
    // Relative guard: a numerically constant target has no variance to explain.
    const double tiny = 1e-20 * std::max(1.0, y.squaredNorm());
    const double r2 = sst > tiny ? 1.0 - ssr / sst : 0.0;

    ModelFit fit;
    fit.fit_kind = "linear";
    fit.n_obs = design.rows();
    fit.r_squared = r2;
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

}  // namespace hoops
