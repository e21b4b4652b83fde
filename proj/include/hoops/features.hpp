#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hoops/ingest.hpp"
#include "hoops/types.hpp"

namespace hoops {

struct ExtractionResult {
    std::vector<PotentialAssist> records;
    std::vector<std::string> diagnostics;  // one line per skipped candidate
};

// Detects potential assists: a completed in-play pass whose receiver scores
// within 7 seconds without an intervening pass, rebound, or turnover by his
// team, with covariates measured off the anchor moments.
ExtractionResult extract_potential_assists(const GameBundle& bundle,
                                           const Roster& roster,
                                           const std::vector<AssistLabel>& labels);

// C(1): shooter possession time in seconds. Throws on a non-positive gap.
double possession_time(std::int64_t reception_ms, std::int64_t shot_release_ms);

// C(3): sum of consecutive anchor-pair distances (reception, each dribble,
// shot release). A catch-and-shoot contributes the single direct segment.
double travel_distance(const std::vector<CourtPoint>& anchors);

// C(4)
double pass_distance(const CourtPoint& release, const CourtPoint& reception);

// C(5)/C(6): min distance from the target to the five opposing players in the
// moment nearest t. Negative return means no usable moment was found.
double nearest_defender_distance(const GameBundle& bundle, const PlayerId& target,
                                 const TeamId& target_team, std::int64_t t_ms);

// C(2): dribbles by the shooter strictly between reception and shot release.
int dribble_count(const std::vector<EventRecord>& events, const PlayerId& shooter,
                  std::int64_t reception_ms, std::int64_t shot_release_ms);

// potential_assists.csv checkpoint
void write_potential_assists(const std::string& path,
                             const std::vector<PotentialAssist>& records);
std::vector<PotentialAssist> load_potential_assists(const std::string& path);

}  // namespace hoops
