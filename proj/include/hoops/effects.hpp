#pragma once

#include <map>
#include <string>
#include <vector>

#include "hoops/model_fit.hpp"
#include "hoops/types.hpp"

namespace hoops {

// Per-scorekeeper predicted ratios from the team-level linear fit:
//   PR_H = LR-bar + (beta_G - beta_G-bar) + (beta_B - beta_B-bar)
//   PR_A = LR-bar + (beta_G - beta_G-bar)
struct PredictedRatio {
    TeamId scorekeeper;
    double home = 0.0;
    double away = 0.0;
};
std::vector<PredictedRatio> predicted_ratios(const ModelFit& fit, double league_ratio);

// Dataset means of the six continuous covariates.
struct AveragePotentialAssist {
    double c1 = 0.0;  // seconds
    double c2 = 0.0;  // dribbles
    double c3 = 0.0;  // feet
    double c4 = 0.0;
    double c5 = 0.0;
    double c6 = 0.0;
};
AveragePotentialAssist average_potential_assist(const std::vector<PotentialAssist>& pas);

// V = beta0 + sum_k avg_k * beta_ck, on the original covariate scale.
double baseline_value(const ModelFit& fit, const AveragePotentialAssist& avg);

// E = sigmoid(V' + value * beta) - sigmoid(V'), where V' drops the interest
// group's own term from V when the group is one of c1..c6. For indicator
// groups pass value = 1 and the level name.
double effect_of(const ModelFit& fit, const AveragePotentialAssist& avg,
                 const std::string& group, const std::string& level,
                 double value = 1.0);

// The closed-form core of the above, exposed for sweeps.
double probability_delta(double v, double contribution);

// Groups zeroed when computing adjusted (context-only) totals.
const std::vector<std::string>& non_contextual_groups();

struct PlayerAdjustment {
    PlayerId player;
    long recorded = 0;
    double adjusted = 0.0;
    double change = 0.0;  // adjusted - recorded
    int original_rank = 0;
    int adjusted_rank = 0;
    // Leave-one-group-out probability deltas, in assists:
    // position, passer, home_scorekeeper, away_scorekeeper, team, opponent, home.
    std::map<std::string, double> contributions;
};

struct AdjustedAssistReport {
    std::vector<PlayerAdjustment> players;  // sorted by recorded desc, then id
};

enum class AdjustMode {
    ExpectedAll,         // adjusted = sum of context-only probabilities
    RecordedPlusDelta,   // adjusted = recorded + sum of (context-only - full) deltas
};

AdjustedAssistReport adjust_assists(const ModelFit& fit,
                                    const std::vector<PotentialAssist>& pas,
                                    AdjustMode mode = AdjustMode::ExpectedAll);

struct BonusSample {
    GameId game_id;
    double value = 0.0;  // recorded - expected-without-scorekeeper
};

struct BonusDistribution {
    TeamId scorekeeper;
    bool home_side = false;
    std::vector<BonusSample> samples;  // one per team-game, ordered by game id
    double mean = 0.0;
    double variance = 0.0;  // sample variance
    double mae = 0.0;       // mean absolute deviation from zero
};

// One distribution per (scorekeeper, side) present in the data; home first.
std::vector<BonusDistribution> scorekeeper_bonus(const ModelFit& fit,
                                                 const std::vector<PotentialAssist>& pas);

struct StabilityEntry {
    std::string group;
    int season_a = 0;  // indices into the input fit list
    int season_b = 0;
    int shared_levels = 0;
    double correlation = 0.0;
};

// Pearson correlation of same-named coefficients across each pair of fits.
std::vector<StabilityEntry> coefficient_stability(const std::vector<ModelFit>& fits);

// Report files.
void write_adjusted_assists(const std::string& path, const AdjustedAssistReport& report);
void write_bonus_samples(const std::string& path,
                         const std::vector<BonusDistribution>& dists);
void write_bonus_summary(const std::string& path,
                         const std::vector<BonusDistribution>& dists);  // JSON
void write_stability(const std::string& path, const std::vector<StabilityEntry>& entries);

}  // namespace hoops
