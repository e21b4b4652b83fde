#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hoops {

using TeamId = std::string;
using PlayerId = std::string;
using GameId = std::string;

enum class Position { PointGuard, ShootingGuard, SmallForward, PowerForward, Center };
inline constexpr int kNumPositions = 5;

// "PG" | "SG" | "SF" | "PF" | "C"
Position parse_position(const std::string& s);
const char* position_code(Position p);

enum class CourtZone { Dunk, Paint, Long2, Arc3, Corner3, Heave };
inline constexpr int kNumZones = 6;

CourtZone parse_zone(const std::string& s);
const char* zone_name(CourtZone z);

// Feet; x along court length [0, 94], y along width [0, 50].
// z carries ball height and is NaN for players.
struct CourtPoint {
    double x = 0.0;
    double y = 0.0;
    double z = std::numeric_limits<double>::quiet_NaN();
};

enum class EntityKind { Player, Ball };

struct MomentEntity {
    EntityKind kind = EntityKind::Player;
    TeamId team;      // empty for the ball
    PlayerId player;  // empty for the ball
    CourtPoint pos;
};

// One 25 Hz tracking sample.
struct Moment {
    GameId game_id;
    int quarter = 1;  // >= 5 for overtime
    std::int64_t wall_time_ms = 0;
    double game_clock_s = 0.0;
    std::vector<MomentEntity> entities;
};

enum class EventKind {
    PassRelease,
    PassReceive,
    Dribble,
    ShotRelease,
    ShotMade,
    ShotMissed,
    Rebound,
    Turnover,
    InboundPass,
};

EventKind parse_event_kind(const std::string& s);
const char* event_kind_name(EventKind k);  // UPPER_SNAKE_CASE

struct EventRecord {
    GameId game_id;
    std::int64_t wall_time_ms = 0;
    EventKind kind = EventKind::PassRelease;
    TeamId team;
    PlayerId player;
};

enum class RatioKind { AR, BR };

// One team-game observation for the team-level ratio model.
struct TeamGameRatio {
    GameId game_id;
    TeamId team;
    TeamId opponent;
    bool is_home = false;
    TeamId scorekeeper;  // home team's id
    RatioKind kind = RatioKind::AR;
    double value = 0.0;
};

// One candidate pass with its spatio-temporal covariates and label.
struct PotentialAssist {
    GameId game_id;
    PlayerId passer;
    PlayerId shooter;
    TeamId team;
    TeamId opponent;
    bool is_home = false;
    TeamId scorekeeper;
    Position passer_position = Position::PointGuard;
    double c1_possession_time = 0.0;     // seconds, (0, 7]
    int c2_dribbles = 0;                 // count
    double c3_travel_distance = 0.0;     // feet
    double c4_pass_distance = 0.0;       // feet
    double c5_passer_defender_dist = 0.0;   // feet
    double c6_shooter_defender_dist = 0.0;  // feet
    CourtZone c7_passer_zone = CourtZone::Paint;
    CourtZone c8_shooter_zone = CourtZone::Paint;
    bool label_recorded_assist = false;
    std::int64_t shot_wall_time_ms = 0;  // the made shot, for label matching and grouping
};

}  // namespace hoops
