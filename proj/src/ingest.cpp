#include "hoops/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>

#include "hoops/csv.hpp"
#include "hoops/errors.hpp"
#include "hoops/geometry.hpp"

namespace hoops {

namespace {

constexpr double kBoundsMargin = 5.0;  // feet beyond the court lines

const std::vector<std::string> kMomentsHeader = {
    "game_id", "quarter", "wall_time_ms", "game_clock_s", "entity",
    "team_id", "player_id", "x_ft", "y_ft", "z_ft"};
const std::vector<std::string> kEventsHeader = {"game_id", "wall_time_ms", "kind",
                                                "team_id", "player_id"};
const std::vector<std::string> kBoxHeader = {"game_id", "date", "team_id", "opp_id",
                                             "is_home", "fgm", "fga", "ast", "blk"};
const std::vector<std::string> kRosterHeader = {"player_id", "name", "team_id",
                                                "position"};
const std::vector<std::string> kLabelsHeader = {"game_id", "wall_time_ms", "passer_id"};

void check_bounds(double x, double y, long line) {
    if (x < -kBoundsMargin || x > court::kLength + kBoundsMargin || y < -kBoundsMargin ||
        y > court::kWidth + kBoundsMargin)
        throw ParseError("coordinate out of court bounds: (" + csv::format_double(x) +
                             ", " + csv::format_double(y) + ")",
                         line);
}

}  // namespace

void Roster::add(RosterEntry e) {
    if (e.player.empty()) throw ParseError("empty player_id in roster");
    auto [it, inserted] = index_.emplace(e.player, entries_.size());
    if (!inserted) throw ValidationError("duplicate roster entry: " + e.player);
    entries_.push_back(std::move(e));
}

bool Roster::contains(const PlayerId& p) const { return index_.count(p) != 0; }

const RosterEntry& Roster::at(const PlayerId& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw ValidationError("player not in roster: " + p);
    return entries_[it->second];
}

Roster load_roster(const std::string& path) {
    auto t = csv::Table::read_file(path, kRosterHeader);
    Roster r;
    for (const auto& row : t.rows()) {
        RosterEntry e;
        e.player = row.fields[0];
        e.name = row.fields[1];
        e.team = row.fields[2];
        if (e.team.empty()) throw ParseError("empty team_id in roster", row.line);
        try {
            e.position = parse_position(row.fields[3]);
        } catch (const ParseError&) {
            throw ParseError("bad position '" + row.fields[3] + "'", row.line);
        }
        r.add(std::move(e));
    }
    return r;
}

std::vector<AssistLabel> load_labels(const std::string& path) {
    auto t = csv::Table::read_file(path, kLabelsHeader);
    std::vector<AssistLabel> out;
    out.reserve(t.rows().size());
    for (const auto& row : t.rows()) {
        AssistLabel l;
        l.game_id = row.fields[0];
        l.wall_time_ms = csv::parse_int_field(row, 1, "wall_time_ms");
        l.passer = row.fields[2];
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<BoxLine> load_box_lines(const std::string& path) {
    auto t = csv::Table::read_file(path, kBoxHeader);
    std::vector<BoxLine> out;
    out.reserve(t.rows().size());
    for (const auto& row : t.rows()) {
        BoxLine b;
        b.game_id = row.fields[0];
        b.date = row.fields[1];
        b.team = row.fields[2];
        b.opponent = row.fields[3];
        b.is_home = csv::parse_bool_field(row, 4, "is_home");
        b.fgm = static_cast<int>(csv::parse_int_field(row, 5, "fgm"));
        b.fga = static_cast<int>(csv::parse_int_field(row, 6, "fga"));
        b.ast = static_cast<int>(csv::parse_int_field(row, 7, "ast"));
        b.blk = static_cast<int>(csv::parse_int_field(row, 8, "blk"));
        if (b.fgm < 0 || b.fga < 0 || b.ast < 0 || b.blk < 0)
            throw ParseError("negative box count", row.line);
        if (b.ast > b.fgm)
            throw ValidationError("box line for " + b.team + " in " + b.game_id +
                                  " has AST > FGM");
        if (b.fga < b.fgm)
            throw ValidationError("box line for " + b.team + " in " + b.game_id +
                                  " has FGA < FGM");
        out.push_back(std::move(b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Streaming loader

struct GameStreamLoader::Impl {
    std::ifstream moments;
    std::string moments_path;
    long lineno = 0;
    std::map<GameId, std::vector<EventRecord>> events_by_game;
    std::map<GameId, std::vector<BoxLine>> box_by_game;
    const Roster* roster;
    std::set<GameId> seen;

    // lookahead row state
    bool have_row = false;
    Moment pending;          // partially built moment of the current game
    GameId row_game;
    int row_quarter = 0;
    std::int64_t row_wall = 0;
    double row_clock = 0.0;
    MomentEntity row_entity;

    bool read_row();
    GameBundle build(const GameId& gid, std::vector<Moment> moments_in);
};

bool GameStreamLoader::Impl::read_row() {
    std::string line;
    while (std::getline(moments, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos;
             start = pos + 1)
            f.push_back(line.substr(start, pos - start));
        f.push_back(line.substr(start));
        if (f.size() != kMomentsHeader.size())
            throw ParseError(moments_path + ": expected 10 fields", lineno);

        csv::Row row{std::move(f), lineno};
        row_game = row.fields[0];
        row_quarter = static_cast<int>(csv::parse_int_field(row, 1, "quarter"));
        if (row_quarter < 1) throw ParseError("quarter must be >= 1", lineno);
        row_wall = csv::parse_int_field(row, 2, "wall_time_ms");
        row_clock = csv::parse_double_field(row, 3, "game_clock_s");

        const std::string& ent = row.fields[4];
        MomentEntity e;
        if (ent == "player") {
            e.kind = EntityKind::Player;
            e.team = row.fields[5];
            e.player = row.fields[6];
            if (e.team.empty() || e.player.empty())
                throw ParseError("player entity missing team/player id", lineno);
            if (!row.fields[9].empty())
                throw ParseError("player entity must have empty z_ft", lineno);
        } else if (ent == "ball") {
            e.kind = EntityKind::Ball;
            if (!row.fields[5].empty() || !row.fields[6].empty())
                throw ParseError("ball entity must have empty team/player id", lineno);
            if (!row.fields[9].empty())
                e.pos.z = csv::parse_double_field(row, 9, "z_ft");
        } else {
            throw ParseError("unknown entity '" + ent + "'", lineno);
        }
        e.pos.x = csv::parse_double_field(row, 7, "x_ft");
        e.pos.y = csv::parse_double_field(row, 8, "y_ft");
        check_bounds(e.pos.x, e.pos.y, lineno);
        row_entity = std::move(e);
        have_row = true;
        return true;
    }
    have_row = false;
    return false;
}

GameStreamLoader::GameStreamLoader(const std::string& moments_path,
                                   const std::string& events_path,
                                   const std::string& box_path, const Roster& roster)
    : impl_(std::make_unique<Impl>()) {
    impl_->roster = &roster;
    impl_->moments_path = moments_path;
    impl_->moments.open(moments_path, std::ios::binary);
    if (!impl_->moments) throw ParseError("cannot open file: " + moments_path);

    // header
    std::string header;
    if (!std::getline(impl_->moments, header))
        throw ParseError(moments_path + ": missing header row");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    {
        std::string want;
        for (std::size_t i = 0; i < kMomentsHeader.size(); ++i) {
            if (i) want.push_back(',');
            want += kMomentsHeader[i];
        }
        if (header != want)
            throw ParseError(moments_path + ": unexpected header '" + header + "'", 1);
    }
    impl_->lineno = 1;

    auto et = csv::Table::read_file(events_path, kEventsHeader);
    for (const auto& row : et.rows()) {
        EventRecord ev;
        ev.game_id = row.fields[0];
        ev.wall_time_ms = csv::parse_int_field(row, 1, "wall_time_ms");
        try {
            ev.kind = parse_event_kind(row.fields[2]);
        } catch (const ParseError&) {
            throw ParseError("bad event kind '" + row.fields[2] + "'", row.line);
        }
        ev.team = row.fields[3];
        ev.player = row.fields[4];
        if (!roster.contains(ev.player))
            throw ValidationError("event references player not in roster: " + ev.player);
        impl_->events_by_game[ev.game_id].push_back(std::move(ev));
    }
    for (auto& b : load_box_lines(box_path))
        impl_->box_by_game[b.game_id].push_back(std::move(b));

    impl_->read_row();
}

GameStreamLoader::~GameStreamLoader() = default;

GameBundle GameStreamLoader::Impl::build(const GameId& gid,
                                         std::vector<Moment> game_moments) {
    GameBundle b;
    b.game_id = gid;
    b.moments = std::move(game_moments);

    auto eit = events_by_game.find(gid);
    if (eit == events_by_game.end() || eit->second.empty())
        throw ValidationError("no events for game " + gid);
    b.events = eit->second;
    for (std::size_t i = 1; i < b.events.size(); ++i)
        if (b.events[i].wall_time_ms < b.events[i - 1].wall_time_ms)
            throw ValidationError("events not sorted by wall_time in game " + gid);

    auto bit = box_by_game.find(gid);
    if (bit == box_by_game.end() || bit->second.size() != 2)
        throw ValidationError("expected exactly two box lines for game " + gid);
    b.box = bit->second;
    const BoxLine& first = b.box[0];
    const BoxLine& second = b.box[1];
    if (first.is_home == second.is_home || first.opponent != second.team ||
        second.opponent != first.team)
        throw ValidationError("inconsistent box lines for game " + gid);
    const BoxLine& home_line = first.is_home ? first : second;
    b.home = home_line.team;
    b.away = first.is_home ? second.team : first.team;
    b.date = first.date;

    // moment ordering and ball coverage
    std::map<int, std::int64_t> last_in_quarter;
    std::size_t missing_ball = 0;
    std::int64_t prev_wall = std::numeric_limits<std::int64_t>::min();
    for (const auto& m : b.moments) {
        if (m.wall_time_ms < prev_wall)
            throw ValidationError("moments not sorted by wall_time in game " + gid);
        prev_wall = m.wall_time_ms;
        auto [it, inserted] = last_in_quarter.emplace(m.quarter, m.wall_time_ms);
        if (!inserted) {
            if (m.wall_time_ms <= it->second)
                throw ValidationError("timestamps not strictly increasing in quarter " +
                                      std::to_string(m.quarter) + " of game " + gid);
            it->second = m.wall_time_ms;
        }
        bool has_ball = false;
        for (const auto& e : m.entities)
            if (e.kind == EntityKind::Ball) has_ball = true;
        if (!has_ball) ++missing_ball;
    }
    if (!b.moments.empty() &&
        static_cast<double>(missing_ball) > 0.01 * static_cast<double>(b.moments.size()))
        throw DataQualityError("ball entity missing in >1% of moments of game " + gid);

    normalize_coordinates(b);
    return b;
}

std::optional<GameBundle> GameStreamLoader::next() {
    Impl& im = *impl_;
    if (!im.have_row) return std::nullopt;

    GameId gid = im.row_game;
    if (!im.seen.insert(gid).second)
        throw ValidationError("moments for game " + gid + " are not contiguous");

    std::vector<Moment> moments;
    Moment cur;
    bool cur_open = false;
    while (im.have_row && im.row_game == gid) {
        if (!cur_open || cur.wall_time_ms != im.row_wall || cur.quarter != im.row_quarter) {
            if (cur_open) moments.push_back(std::move(cur));
            cur = Moment{};
            cur.game_id = gid;
            cur.quarter = im.row_quarter;
            cur.wall_time_ms = im.row_wall;
            cur.game_clock_s = im.row_clock;
            cur_open = true;
        }
        cur.entities.push_back(std::move(im.row_entity));
        im.read_row();
    }
    if (cur_open) moments.push_back(std::move(cur));
    return im.build(gid, std::move(moments));
}

std::vector<GameBundle> load_games(const std::string& moments_path,
                                   const std::string& events_path,
                                   const std::string& box_path, const Roster& roster) {
    GameStreamLoader loader(moments_path, events_path, box_path, roster);
    std::vector<GameBundle> out;
    while (auto b = loader.next()) out.push_back(std::move(*b));
    return out;
}

GameBundle load_game(const std::string& moments_path, const std::string& events_path,
                     const std::string& box_path, const std::string& roster_path) {
    Roster roster = load_roster(roster_path);
    auto games = load_games(moments_path, events_path, box_path, roster);
    if (games.empty()) throw ValidationError("no games found");
    if (games.size() > 1) throw ValidationError("expected a single game");
    return std::move(games.front());
}

// ---------------------------------------------------------------------------
// Coordinate normalization

const CourtPoint* locate_player(const std::vector<Moment>& moments,
                                const PlayerId& player, std::int64_t t,
                                std::int64_t tol_ms) {
    // moments sorted by wall_time; nearest sample within the anchor tolerance
    auto lo = std::lower_bound(
        moments.begin(), moments.end(), t - tol_ms,
        [](const Moment& m, std::int64_t v) { return m.wall_time_ms < v; });
    const CourtPoint* best = nullptr;
    std::int64_t best_dt = tol_ms + 1;
    for (auto it = lo; it != moments.end() && it->wall_time_ms <= t + tol_ms; ++it) {
        std::int64_t dt = std::llabs(it->wall_time_ms - t);
        if (dt >= best_dt) continue;
        for (const auto& e : it->entities) {
            if (e.kind == EntityKind::Player && e.player == player) {
                best = &e.pos;
                best_dt = dt;
                break;
            }
        }
    }
    return best;
}

namespace {

void reflect_range(std::vector<Moment>& moments, std::int64_t from_exclusive,
                   std::int64_t to_inclusive) {
    for (auto& m : moments) {
        if (m.wall_time_ms <= from_exclusive) continue;
        if (m.wall_time_ms > to_inclusive) break;
        for (auto& e : m.entities) {
            e.pos.x = court::kLength - e.pos.x;
            e.pos.y = court::kWidth - e.pos.y;
        }
    }
}

bool is_terminal(EventKind k) {
    return k == EventKind::ShotMade || k == EventKind::ShotMissed ||
           k == EventKind::Turnover;
}

}  // namespace

void normalize_coordinates(GameBundle& bundle) {
    // Split the event stream into possessions at terminal events; a possession
    // attacking the high-x basket (anchor location x > 47) is mirrored.
    std::int64_t window_start = std::numeric_limits<std::int64_t>::min();
    std::size_t i = 0;
    const auto& ev = bundle.events;
    while (i < ev.size()) {
        std::size_t j = i;
        while (j < ev.size() && !is_terminal(ev[j].kind)) ++j;
        std::int64_t window_end =
            j < ev.size() ? ev[j].wall_time_ms : std::numeric_limits<std::int64_t>::max();

        // anchor: last shot release, else last pass reception, in the window
        const EventRecord* anchor = nullptr;
        for (std::size_t k = i; k <= j && k < ev.size(); ++k) {
            if (ev[k].kind == EventKind::ShotRelease) anchor = &ev[k];
        }
        if (anchor == nullptr) {
            for (std::size_t k = i; k <= j && k < ev.size(); ++k)
                if (ev[k].kind == EventKind::PassReceive) anchor = &ev[k];
        }
        if (anchor != nullptr) {
            const CourtPoint* pos =
                locate_player(bundle.moments, anchor->player, anchor->wall_time_ms);
            if (pos != nullptr && pos->x > court::kLength / 2.0)
                reflect_range(bundle.moments, window_start, window_end);
        }
        window_start = window_end;
        i = j + 1;
    }
}

// ---------------------------------------------------------------------------
// Ratios

std::vector<TeamGameRatio> ratios_from_box(const std::vector<BoxLine>& box,
                                           RatioKind kind,
                                           std::vector<std::string>* warnings) {
    std::map<GameId, std::vector<const BoxLine*>> by_game;
    for (const auto& b : box) by_game[b.game_id].push_back(&b);

    std::vector<TeamGameRatio> out;
    for (const auto& [gid, lines] : by_game) {
        if (lines.size() != 2)
            throw ValidationError("expected exactly two box lines for game " + gid);
        const BoxLine* home = lines[0]->is_home ? lines[0] : lines[1];
        if (lines[0]->is_home == lines[1]->is_home)
            throw ValidationError("inconsistent home flags for game " + gid);
        for (const BoxLine* line : {lines[0], lines[1]}) {
            const BoxLine* opp = line == lines[0] ? lines[1] : lines[0];
            TeamGameRatio r;
            r.game_id = gid;
            r.team = line->team;
            r.opponent = line->opponent;
            r.is_home = line->is_home;
            r.scorekeeper = home->team;
            r.kind = kind;
            if (kind == RatioKind::AR) {
                if (line->fgm == 0) {
                    if (warnings)
                        warnings->push_back("skipped " + line->team + " in " + gid +
                                            ": AR undefined (FGM = 0)");
                    continue;
                }
                r.value = static_cast<double>(line->ast) / line->fgm;
            } else {
                if (opp->fga == 0) {
                    if (warnings)
                        warnings->push_back("skipped " + line->team + " in " + gid +
                                            ": BR undefined (opponent FGA = 0)");
                    continue;
                }
                r.value = static_cast<double>(line->blk) / opp->fga;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<TeamGameRatio> compute_team_game_ratios(const GameBundle& bundle,
                                                    std::vector<std::string>* warnings) {
    auto ar = ratios_from_box(bundle.box, RatioKind::AR, warnings);
    auto br = ratios_from_box(bundle.box, RatioKind::BR, warnings);
    ar.insert(ar.end(), br.begin(), br.end());
    return ar;
}

// ---------------------------------------------------------------------------
// Serialization

struct GameWriter::Impl {
    csv::Writer moments;
    csv::Writer events;
    csv::Writer box;
    explicit Impl(const std::string& dir)
        : moments(dir + "/moments.csv"),
          events(dir + "/events.csv"),
          box(dir + "/box.csv") {
        moments.write_row(kMomentsHeader);
        events.write_row(kEventsHeader);
        box.write_row(kBoxHeader);
    }
};

GameWriter::GameWriter(const std::string& dir) : impl_(std::make_unique<Impl>(dir)) {}
GameWriter::~GameWriter() = default;

void GameWriter::add(const GameBundle& b) {
    for (const auto& m : b.moments) {
        for (const auto& e : m.entities) {
            bool ball = e.kind == EntityKind::Ball;
            impl_->moments.write_row({b.game_id, std::to_string(m.quarter),
                                      std::to_string(m.wall_time_ms),
                                      csv::format_double(m.game_clock_s),
                                      ball ? "ball" : "player", e.team, e.player,
                                      csv::format_double(e.pos.x),
                                      csv::format_double(e.pos.y),
                                      ball && std::isfinite(e.pos.z)
                                          ? csv::format_double(e.pos.z)
                                          : ""});
        }
    }
    for (const auto& ev : b.events)
        impl_->events.write_row({b.game_id, std::to_string(ev.wall_time_ms),
                                 event_kind_name(ev.kind), ev.team, ev.player});
    for (const auto& line : b.box)
        impl_->box.write_row({b.game_id, line.date, line.team, line.opponent,
                              line.is_home ? "1" : "0", std::to_string(line.fgm),
                              std::to_string(line.fga), std::to_string(line.ast),
                              std::to_string(line.blk)});
}

void GameWriter::close() {
    impl_->moments.close();
    impl_->events.close();
    impl_->box.close();
}

void write_games(const std::string& dir, const std::vector<GameBundle>& bundles) {
    GameWriter w(dir);
    for (const auto& b : bundles) w.add(b);
    w.close();
}

void write_roster(const std::string& path, const Roster& roster) {
    csv::Writer w(path);
    w.write_row(kRosterHeader);
    for (const auto& e : roster.entries())
        w.write_row({e.player, e.name, e.team, position_code(e.position)});
    w.close();
}

void write_labels(const std::string& path, const std::vector<AssistLabel>& labels) {
    csv::Writer w(path);
    w.write_row(kLabelsHeader);
    for (const auto& l : labels)
        w.write_row({l.game_id, std::to_string(l.wall_time_ms), l.passer});
    w.close();
}

}  // namespace hoops
