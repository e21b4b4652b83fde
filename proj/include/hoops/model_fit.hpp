#pragma once

#include <string>
#include <vector>

namespace hoops {

// Estimated coefficients on the original covariate scale, grouped by effect
// family. Serialized as
//   {fit_kind, lambda, n_obs, diagnostics, groups: {name: {level: value}}}
struct ModelFit {
    struct Group {
        std::string name;
        std::vector<std::string> levels;
        std::vector<double> values;
    };

    std::string fit_kind;  // "linear" | "logistic"
    double lambda = 0.0;   // logistic only
    int n_obs = 0;
    double r_squared = 0.0;             // linear
    double mean_log_likelihood = 0.0;   // logistic, in-sample per observation
    std::vector<Group> groups;

    const Group* find(const std::string& name) const;
    // Coefficient for a level, 0 when the group or level is absent.
    double value(const std::string& group, const std::string& level) const;
    // Single-column groups (intercept, home, c1..c6).
    double scalar(const std::string& group) const { return value(group, "value"); }
    // Mean over a group's levels (the beta-bar used for centering).
    double group_mean(const std::string& group) const;

    std::string to_json() const;
    static ModelFit from_json(const std::string& text);
    void save(const std::string& path) const;
    static ModelFit load(const std::string& path);
};

}  // namespace hoops
