#include "hoops/design.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "hoops/errors.hpp"

namespace hoops {

double continuous_value(const PotentialAssist& pa, int k) {
    switch (k) {
        case 0: return pa.c1_possession_time;
        case 1: return static_cast<double>(pa.c2_dribbles);
        case 2: return pa.c3_travel_distance;
        case 3: return pa.c4_pass_distance;
        case 4: return pa.c5_passer_defender_dist;
        case 5: return pa.c6_shooter_defender_dist;
    }
    throw InvalidInputError("continuous_value: index out of range");
}

ModelSpec parse_model_spec(const std::string& s) {
    if (s == "full") return ModelSpec::Full;
    if (s == "no-scorekeeper") return ModelSpec::NoScorekeeper;
    if (s == "no-context") return ModelSpec::NoContext;
    if (s == "intercept") return ModelSpec::InterceptOnly;
    throw InvalidInputError("unknown model spec: '" + s + "'");
}

const char* model_spec_name(ModelSpec s) {
    switch (s) {
        case ModelSpec::Full: return "full";
        case ModelSpec::NoScorekeeper: return "no-scorekeeper";
        case ModelSpec::NoContext: return "no-context";
        case ModelSpec::InterceptOnly: return "intercept";
    }
    return "?";
}

const ColumnGroup* DesignMatrix::find_group(const std::string& name) const {
    for (const auto& g : groups)
        if (g.name == name) return &g;
    return nullptr;
}

std::string zone_pair_level(CourtZone pz, CourtZone sz) {
    return std::string(zone_name(pz)) + ":" + zone_name(sz);
}

namespace {

struct Builder {
    DesignMatrix design;
    std::vector<Eigen::Triplet<double>> triplets;
    int next_col = 0;

    // returns the group's offset
    int add_group(const std::string& name, std::vector<std::string> levels,
                  bool continuous = false) {
        ColumnGroup g;
        g.name = name;
        g.levels = std::move(levels);
        g.offset = next_col;
        g.continuous = continuous;
        next_col += g.size();
        design.groups.push_back(std::move(g));
        return design.groups.back().offset;
    }

    void set(int row, int col, double v) { triplets.emplace_back(row, col, v); }

    void finish(int rows) {
        design.matrix.resize(rows, next_col);
        design.matrix.setFromTriplets(triplets.begin(), triplets.end());
        design.transforms.assign(next_col, Standardizer{});
        design.penalty_mask.assign(next_col, 1.0);
        if (const auto* g = design.find_group("intercept"))
            design.penalty_mask[g->offset] = 0.0;
    }
};

std::map<std::string, int> level_index(const std::vector<std::string>& levels) {
    std::map<std::string, int> m;
    for (int i = 0; i < static_cast<int>(levels.size()); ++i) m[levels[i]] = i;
    return m;
}

std::vector<std::string> zone_levels() {
    std::vector<std::string> v;
    for (int z = 0; z < kNumZones; ++z) v.push_back(zone_name(static_cast<CourtZone>(z)));
    return v;
}

std::vector<std::string> position_levels() {
    std::vector<std::string> v;
    for (int p = 0; p < kNumPositions; ++p)
        v.push_back(position_code(static_cast<Position>(p)));
    return v;
}

std::vector<std::string> zone_pair_levels() {
    std::vector<std::string> v;
    for (int a = 0; a < kNumZones; ++a)
        for (int b = 0; b < kNumZones; ++b)
            v.push_back(zone_pair_level(static_cast<CourtZone>(a),
                                        static_cast<CourtZone>(b)));
    return v;
}

// Standardize one continuous column in place inside the triplet list is
// awkward; instead values are collected first and standardized before insert.
struct ContinuousColumn {
    std::string name;
    std::vector<double> values;
};

}  // namespace

std::pair<DesignMatrix, Eigen::VectorXd> build_team_design(
    const std::vector<TeamGameRatio>& obs) {
    if (obs.empty()) throw InvalidInputError("build_team_design: no observations");

    std::set<std::string> team_set;
    for (const auto& o : obs) {
        if (o.team.empty() || o.opponent.empty() || o.scorekeeper.empty())
            throw ValidationError("empty team id in ratio observation");
        const TeamId& home_team = o.is_home ? o.team : o.opponent;
        if (o.scorekeeper != home_team)
            throw ValidationError("scorekeeper must be the home team in game " +
                                  o.game_id);
        team_set.insert(o.team);
        team_set.insert(o.opponent);
    }
    if (team_set.size() < 2)
        throw InvalidInputError("build_team_design: need at least 2 distinct teams");
    std::vector<std::string> teams(team_set.begin(), team_set.end());
    auto tidx = level_index(teams);

    Builder b;
    int c_int = b.add_group("intercept", {"value"});
    int c_home = b.add_group("home", {"value"});
    int c_team = b.add_group("team", teams);
    int c_opp = b.add_group("opponent", teams);
    int c_skg = b.add_group("sk_generosity", teams);
    int c_skb = b.add_group("sk_bias", teams);

    Eigen::VectorXd y(static_cast<Eigen::Index>(obs.size()));
    for (int r = 0; r < static_cast<int>(obs.size()); ++r) {
        const auto& o = obs[r];
        b.set(r, c_int, 1.0);
        if (o.is_home) b.set(r, c_home, 1.0);
        b.set(r, c_team + tidx.at(o.team), 1.0);
        b.set(r, c_opp + tidx.at(o.opponent), 1.0);
        b.set(r, c_skg + tidx.at(o.scorekeeper), 1.0);
        if (o.is_home) b.set(r, c_skb + tidx.at(o.scorekeeper), 1.0);
        y[r] = o.value;
    }
    b.finish(static_cast<int>(obs.size()));
    return {std::move(b.design), std::move(y)};
}

std::pair<DesignMatrix, Eigen::VectorXd> build_contextual_design(
    const std::vector<PotentialAssist>& pas, ModelSpec spec) {
    if (pas.empty()) throw InvalidInputError("build_contextual_design: no observations");

    std::set<std::string> team_set;
    std::set<std::string> passer_set;
    for (const auto& p : pas) {
        team_set.insert(p.team);
        team_set.insert(p.opponent);
        passer_set.insert(p.passer);
    }
    std::vector<std::string> teams(team_set.begin(), team_set.end());
    std::vector<std::string> passers(passer_set.begin(), passer_set.end());
    auto tidx = level_index(teams);
    auto pidx = level_index(passers);

    const bool scorekeeper = spec != ModelSpec::NoScorekeeper &&
                             spec != ModelSpec::InterceptOnly;
    const bool context = spec == ModelSpec::Full || spec == ModelSpec::NoScorekeeper;
    const bool team_level = spec != ModelSpec::InterceptOnly;

    Builder b;
    int c_int = b.add_group("intercept", {"value"});
    int c_home = -1, c_team = -1, c_opp = -1, c_skg = -1, c_skb = -1;
    int c_passer = -1, c_pos = -1, c_cont = -1, c_pz = -1, c_sz = -1, c_zp = -1;
    if (team_level) {
        c_home = b.add_group("home", {"value"});
        c_team = b.add_group("team", teams);
        c_opp = b.add_group("opponent", teams);
    }
    if (scorekeeper) {
        c_skg = b.add_group("sk_generosity", teams);
        c_skb = b.add_group("sk_bias", teams);
    }
    if (context) {
        c_passer = b.add_group("passer", passers);
        c_pos = b.add_group("position", position_levels());
        c_cont = b.add_group("c1", {"value"}, true);
        b.add_group("c2", {"value"}, true);
        b.add_group("c3", {"value"}, true);
        b.add_group("c4", {"value"}, true);
        b.add_group("c5", {"value"}, true);
        b.add_group("c6", {"value"}, true);
        c_pz = b.add_group("passer_zone", zone_levels());
        c_sz = b.add_group("shooter_zone", zone_levels());
        c_zp = b.add_group("zone_pair", zone_pair_levels());
    }

    const int n = static_cast<int>(pas.size());

    // standardization of the continuous block
    std::array<Standardizer, 6> std6;
    if (context) {
        for (int k = 0; k < 6; ++k) {
            double mean = 0.0;
            for (const auto& p : pas) mean += continuous_value(p, k);
            mean /= n;
            double var = 0.0;
            for (const auto& p : pas) {
                double d = continuous_value(p, k) - mean;
                var += d * d;
            }
            double sd = std::sqrt(var / n);
            std6[k] = Standardizer{mean, sd > 0.0 ? sd : 1.0};
        }
    }

    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
        const auto& p = pas[r];
        b.set(r, c_int, 1.0);
        if (team_level) {
            if (p.is_home) b.set(r, c_home, 1.0);
            b.set(r, c_team + tidx.at(p.team), 1.0);
            b.set(r, c_opp + tidx.at(p.opponent), 1.0);
        }
        if (scorekeeper) {
            auto it = tidx.find(p.scorekeeper);
            if (it == tidx.end())
                throw ValidationError("scorekeeper id not among teams: " + p.scorekeeper);
            b.set(r, c_skg + it->second, 1.0);
            if (p.is_home) b.set(r, c_skb + it->second, 1.0);
        }
        if (context) {
            b.set(r, c_passer + pidx.at(p.passer), 1.0);
            b.set(r, c_pos + static_cast<int>(p.passer_position), 1.0);
            for (int k = 0; k < 6; ++k)
                b.set(r, c_cont + k,
                      (continuous_value(p, k) - std6[k].mean) / std6[k].scale);
            b.set(r, c_pz + static_cast<int>(p.c7_passer_zone), 1.0);
            b.set(r, c_sz + static_cast<int>(p.c8_shooter_zone), 1.0);
            b.set(r, c_zp + static_cast<int>(p.c7_passer_zone) * kNumZones +
                         static_cast<int>(p.c8_shooter_zone),
                  1.0);
        }
        y[r] = p.label_recorded_assist ? 1.0 : 0.0;
    }
    b.finish(n);
    if (context)
        for (int k = 0; k < 6; ++k) b.design.transforms[c_cont + k] = std6[k];
    return {std::move(b.design), std::move(y)};
}

}  // namespace hoops
