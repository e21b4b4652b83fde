#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hoops/types.hpp"

namespace hoops {

struct BoxLine {
    GameId game_id;
    std::string date;
    TeamId team;
    TeamId opponent;
    bool is_home = false;
    int fgm = 0;
    int fga = 0;
    int ast = 0;
    int blk = 0;
};

struct RosterEntry {
    PlayerId player;
    std::string name;
    TeamId team;
    Position position = Position::PointGuard;
};

class Roster {
public:
    void add(RosterEntry e);
    bool contains(const PlayerId& p) const;
    const RosterEntry& at(const PlayerId& p) const;  // throws ValidationError if absent
    const std::vector<RosterEntry>& entries() const { return entries_; }

private:
    std::vector<RosterEntry> entries_;
    std::map<PlayerId, std::size_t> index_;
};

// One scorekeeper decision: the made shot and the credited passer.
struct AssistLabel {
    GameId game_id;
    std::int64_t wall_time_ms = 0;
    PlayerId passer;
};

// Everything known about a single game, coordinates normalized so every
// possession attacks the basket at (5.25, 25). Immutable after load.
struct GameBundle {
    GameId game_id;
    std::string date;
    TeamId home;
    TeamId away;
    std::vector<Moment> moments;     // wall-time ordered
    std::vector<EventRecord> events; // wall-time ordered
    std::vector<BoxLine> box;        // exactly two lines
};

Roster load_roster(const std::string& path);
std::vector<AssistLabel> load_labels(const std::string& path);
std::vector<BoxLine> load_box_lines(const std::string& path);

// Streams games out of the canonical CSV files one bundle at a time;
// moments.csv must be grouped by game_id. Each bundle is validated and
// coordinate-normalized before it is returned.
class GameStreamLoader {
public:
    GameStreamLoader(const std::string& moments_path, const std::string& events_path,
                     const std::string& box_path, const Roster& roster);
    ~GameStreamLoader();
    GameStreamLoader(const GameStreamLoader&) = delete;
    GameStreamLoader& operator=(const GameStreamLoader&) = delete;

    std::optional<GameBundle> next();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Loads every game at once. Convenience over GameStreamLoader.
std::vector<GameBundle> load_games(const std::string& moments_path,
                                   const std::string& events_path,
                                   const std::string& box_path, const Roster& roster);

// Single-game loader; throws ValidationError if the files hold more than one game.
GameBundle load_game(const std::string& moments_path, const std::string& events_path,
                     const std::string& box_path, const std::string& roster_path);

// Reflects every possession that attacks the high-x basket so that all play
// runs toward (5.25, 25). Idempotent. Called by the loaders.
void normalize_coordinates(GameBundle& bundle);

// Events and tracking samples are asynchronous streams: an anchor position is
// the player's location in the moment nearest t_ms, within tol_ms (two frames
// at 25 Hz). Returns nullptr when no such moment exists.
inline constexpr std::int64_t kAnchorToleranceMs = 80;
const CourtPoint* locate_player(const std::vector<Moment>& moments,
                                const PlayerId& player, std::int64_t t_ms,
                                std::int64_t tol_ms = kAnchorToleranceMs);

// AR and BR observations for both teams of a game. Team-games with an
// undefined ratio are skipped and reported through `warnings`.
std::vector<TeamGameRatio> compute_team_game_ratios(
    const GameBundle& bundle, std::vector<std::string>* warnings = nullptr);

// Same, straight off box lines (no tracking data needed).
std::vector<TeamGameRatio> ratios_from_box(const std::vector<BoxLine>& box,
                                           RatioKind kind,
                                           std::vector<std::string>* warnings = nullptr);

// Serialization back to the canonical schemas.
void write_games(const std::string& dir, const std::vector<GameBundle>& bundles);

// Streaming counterpart of write_games: appends one bundle at a time to
// moments.csv / events.csv / box.csv in `dir` without holding a season in memory.
class GameWriter {
public:
    explicit GameWriter(const std::string& dir);
    ~GameWriter();
    GameWriter(const GameWriter&) = delete;
    GameWriter& operator=(const GameWriter&) = delete;

    void add(const GameBundle& bundle);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

void write_roster(const std::string& path, const Roster& roster);
void write_labels(const std::string& path, const std::vector<AssistLabel>& labels);

}  // namespace hoops
