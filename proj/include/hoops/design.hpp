#pragma once

#include <Eigen/Sparse>
#include <string>
#include <utility>
#include <vector>

#include "hoops/types.hpp"

namespace hoops {

// Column groups dropped for the reduced validation models.
enum class ModelSpec { Full, NoScorekeeper, NoContext, InterceptOnly };
ModelSpec parse_model_spec(const std::string& s);  // full|no-scorekeeper|no-context|intercept
const char* model_spec_name(ModelSpec s);

struct Standardizer {
    double mean = 0.0;
    double scale = 1.0;  // standard deviation, 1 for constant or indicator columns
};

struct ColumnGroup {
    std::string name;
    std::vector<std::string> levels;  // single level "value" for continuous groups
    int offset = 0;                   // first column index
    bool continuous = false;
    int size() const { return static_cast<int>(levels.size()); }
};

struct DesignMatrix {
    std::vector<ColumnGroup> groups;
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    std::vector<Standardizer> transforms;  // per column
    std::vector<double> penalty_mask;      // per column; intercept unpenalized

    int rows() const { return static_cast<int>(matrix.rows()); }
    int cols() const { return static_cast<int>(matrix.cols()); }
    const ColumnGroup* find_group(const std::string& name) const;
};

// Team-level ratio design: intercept, home, team, opponent, sk_generosity,
// sk_bias (the home x scorekeeper interaction). Requires >= 2 distinct teams.
std::pair<DesignMatrix, Eigen::VectorXd> build_team_design(
    const std::vector<TeamGameRatio>& obs);

// Pass-level design. Continuous covariates are standardized; the transform is
// kept so coefficients can be mapped back to the original scale.
std::pair<DesignMatrix, Eigen::VectorXd> build_contextual_design(
    const std::vector<PotentialAssist>& pas, ModelSpec spec = ModelSpec::Full);

// Fixed level name for the zone-pair interaction.
std::string zone_pair_level(CourtZone passer_zone, CourtZone shooter_zone);

// C(k+1) for k in [0, 6): the continuous covariates in design order.
double continuous_value(const PotentialAssist& pa, int k);

}  // namespace hoops
