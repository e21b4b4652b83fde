#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hoops/ingest.hpp"
#include "hoops/model_fit.hpp"
#include "hoops/types.hpp"

namespace hoops {

// Planted coefficients on the original covariate scale. Missing map entries
// read as zero, so a default-constructed truth is the all-zero model.
struct GroundTruth {
    double intercept = 0.0;
    double home = 0.0;
    std::array<double, 6> c{};  // slopes for C(1)..C(6)
    std::map<TeamId, double> team;
    std::map<TeamId, double> opponent;
    std::map<TeamId, double> sk_generosity;
    std::map<TeamId, double> sk_bias;
    std::map<PlayerId, double> passer;
    std::array<double, kNumPositions> position{};
    std::array<double, kNumZones> passer_zone{};
    std::array<double, kNumZones> shooter_zone{};
    std::array<std::array<double, kNumZones>, kNumZones> zone_pair{};
    int possessions_per_game = 50;  // qualifying passes per game

    // Linear predictor of a scripted pass under this truth.
    double eta(const PotentialAssist& pa) const;

    std::string to_json() const;
    static GroundTruth from_json(const std::string& text);
    void save(const std::string& path) const;
    static GroundTruth load(const std::string& path);
};

// The fixed 30-team league and its one-player-per-position rosters.
std::vector<TeamId> league_teams();
Roster league_roster();

// Randomized truth with every effect family populated. Each one-hot group is
// centered; passer effects are centered within position and the zone-pair
// surface is doubly centered, so the planted values sit in the subspace the
// penalized fit can identify.
GroundTruth default_truth(std::uint64_t seed);

struct ScheduleEntry {
    GameId id;
    TeamId home;
    TeamId away;
};
std::vector<ScheduleEntry> make_schedule(int n_games);

// Stable per-game stream split: parallel generation cannot reorder draws.
std::uint64_t game_seed(std::uint64_t season_seed, int game_index);

struct SynthGame {
    GameBundle bundle;  // coordinate-normalized
    std::vector<AssistLabel> labels;
    std::vector<PotentialAssist> truth_rows;  // the generator's own covariate table
};

SynthGame generate_game(const GroundTruth& truth, const ScheduleEntry& entry,
                        const Roster& roster, std::uint64_t seed);

std::vector<SynthGame> generate_season(const GroundTruth& truth, int n_games,
                                       std::uint64_t seed);

// Streams a season to moments.csv / events.csv / box.csv / roster.csv /
// assists.csv / ground_truth.json in `dir`, in raw (un-normalized) coordinates.
void write_season(const std::string& dir, const GroundTruth& truth, int n_games,
                  std::uint64_t seed);

struct RecoveryRow {
    std::string group;
    int levels = 0;
    double correlation = 0.0;  // centered truth vs centered fit
    double rmse = 0.0;
};

std::vector<RecoveryRow> recovery_report(const GroundTruth& truth, const ModelFit& fit);
void write_recovery(const std::string& path, const std::vector<RecoveryRow>& rows);

}  // namespace hoops
