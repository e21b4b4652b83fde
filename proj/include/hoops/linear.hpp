#pragma once

#include <Eigen/Dense>

#include "hoops/design.hpp"
#include "hoops/model_fit.hpp"

namespace hoops {

// Minimum-norm least squares for the team-level ratio model. The full
// indicator design is rank deficient (each one-hot group sums to the
// intercept column, the home x scorekeeper group to the home column), so
// predictions are the invariant object; consumers center coefficients
// within each group before interpreting them.
ModelFit fit_team_model(const DesignMatrix& design, const Eigen::VectorXd& y);

// The raw minimum-norm coefficient vector, for tests and diagnostics.
Eigen::VectorXd team_model_coefficients(const DesignMatrix& design,
                                        const Eigen::VectorXd& y);

}  // namespace hoops
