#include "hoops/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "hoops/csv.hpp"
#include "hoops/errors.hpp"
#include "hoops/geometry.hpp"

namespace hoops {

namespace {
constexpr double kPossessionWindowS = 7.0;  // closed upper bound

bool breaks_possession(EventKind k) {
    return k == EventKind::Rebound || k == EventKind::Turnover ||
           k == EventKind::ShotMade || k == EventKind::ShotMissed;
}
}  // namespace

double possession_time(std::int64_t reception_ms, std::int64_t shot_release_ms) {
    if (shot_release_ms <= reception_ms)
        throw InvalidInputError("possession_time: shot release must follow reception");
    return static_cast<double>(shot_release_ms - reception_ms) / 1000.0;
}

double travel_distance(const std::vector<CourtPoint>& anchors) {
    if (anchors.size() < 2)
        throw InvalidInputError("travel_distance: need at least reception and release");
    double total = 0.0;
    for (std::size_t i = 1; i < anchors.size(); ++i)
        total += distance(anchors[i - 1], anchors[i]);
    return total;
}

double pass_distance(const CourtPoint& release, const CourtPoint& reception) {
    return distance(release, reception);
}

double nearest_defender_distance(const GameBundle& bundle, const PlayerId& target,
                                 const TeamId& target_team, std::int64_t t_ms) {
    // nearest moment containing the target and all five opponents
    const auto& moments = bundle.moments;
    auto lo = std::lower_bound(
        moments.begin(), moments.end(), t_ms - kAnchorToleranceMs,
        [](const Moment& m, std::int64_t v) { return m.wall_time_ms < v; });
    double best = -1.0;
    std::int64_t best_dt = kAnchorToleranceMs + 1;
    for (auto it = lo;
         it != moments.end() && it->wall_time_ms <= t_ms + kAnchorToleranceMs; ++it) {
        std::int64_t dt = std::llabs(it->wall_time_ms - t_ms);
        if (dt >= best_dt) continue;
        const CourtPoint* tp = nullptr;
        int opponents = 0;
        double min_d = std::numeric_limits<double>::infinity();
        for (const auto& e : it->entities) {
            if (e.kind != EntityKind::Player) continue;
            if (e.player == target) tp = &e.pos;
        }
        if (tp == nullptr) continue;
        for (const auto& e : it->entities) {
            if (e.kind != EntityKind::Player || e.team == target_team) continue;
            ++opponents;
            min_d = std::min(min_d, distance(*tp, e.pos));
        }
        if (opponents != 5) continue;
        best = min_d;
        best_dt = dt;
    }
    return best;
}

int dribble_count(const std::vector<EventRecord>& events, const PlayerId& shooter,
                  std::int64_t reception_ms, std::int64_t shot_release_ms) {
    int n = 0;
    for (const auto& ev : events) {
        if (ev.wall_time_ms <= reception_ms) continue;
        if (ev.wall_time_ms >= shot_release_ms) break;
        if (ev.kind == EventKind::Dribble && ev.player == shooter) ++n;
    }
    return n;
}

ExtractionResult extract_potential_assists(const GameBundle& bundle,
                                           const Roster& roster,
                                           const std::vector<AssistLabel>& labels) {
    ExtractionResult out;
    const auto& ev = bundle.events;

    std::map<std::pair<std::int64_t, PlayerId>, bool> label_index;
    for (const auto& l : labels)
        if (l.game_id == bundle.game_id) label_index[{l.wall_time_ms, l.passer}] = true;

    auto skip = [&](std::int64_t t, const std::string& why) {
        std::ostringstream os;
        os << bundle.game_id << " t=" << t << ": " << why;
        out.diagnostics.push_back(os.str());
    };

    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != EventKind::ShotMade) continue;
        const PlayerId& shooter = ev[i].player;
        const TeamId& team = ev[i].team;
        const std::int64_t made_ms = ev[i].wall_time_ms;

        // the shot release this make resolves
        std::size_t rel = i;
        bool found_release = false;
        for (std::size_t k = i; k-- > 0;) {
            if (breaks_possession(ev[k].kind)) break;
            if (ev[k].kind == EventKind::ShotRelease && ev[k].player == shooter) {
                rel = k;
                found_release = true;
                break;
            }
        }
        if (!found_release) continue;
        const std::int64_t ts = ev[rel].wall_time_ms;

        // the reception that started the shooter's possession
        std::size_t rec = rel;
        bool found_receive = false;
        for (std::size_t k = rel; k-- > 0;) {
            if (breaks_possession(ev[k].kind)) break;
            if (ev[k].kind == EventKind::PassReceive && ev[k].player == shooter) {
                rec = k;
                found_receive = true;
                break;
            }
        }
        if (!found_receive) continue;  // no completed pass in this possession
        const std::int64_t tr = ev[rec].wall_time_ms;

        // the matching release immediately preceding the reception
        std::size_t pass = rec;
        bool found_pass = false;
        for (std::size_t k = rec; k-- > 0;) {
            if (breaks_possession(ev[k].kind)) break;
            if (ev[k].kind == EventKind::PassRelease || ev[k].kind == EventKind::InboundPass) {
                pass = k;
                found_pass = true;
                break;
            }
            if (ev[k].kind == EventKind::PassReceive) break;  // unmatched reception
        }
        if (!found_pass) continue;
        if (ev[pass].kind == EventKind::InboundPass) continue;  // ball not in play
        if (ev[pass].team != team || ev[pass].player == shooter) continue;
        const PlayerId& passer = ev[pass].player;
        const std::int64_t t_rel = ev[pass].wall_time_ms;

        if (ts <= tr) continue;
        double c1 = possession_time(tr, ts);
        if (c1 > kPossessionWindowS) continue;

        // no intervening team pass/rebound/turnover between reception and shot
        bool broken = false;
        for (std::size_t k = rec + 1; k < rel && !broken; ++k) {
            EventKind kk = ev[k].kind;
            bool passish = kk == EventKind::PassRelease || kk == EventKind::PassReceive ||
                           kk == EventKind::InboundPass;
            bool dead = kk == EventKind::Rebound || kk == EventKind::Turnover;
            if ((passish || dead) && ev[k].team == team) broken = true;
        }
        if (broken) continue;

        // anchor positions
        const CourtPoint* passer_at_release =
            locate_player(bundle.moments, passer, t_rel);
        const CourtPoint* shooter_at_reception =
            locate_player(bundle.moments, shooter, tr);
        const CourtPoint* shooter_at_shot = locate_player(bundle.moments, shooter, ts);
        if (!passer_at_release || !shooter_at_reception || !shooter_at_shot) {
            skip(made_ms, "missing anchor moment for " +
                              std::string(!passer_at_release ? passer : shooter));
            continue;
        }

        std::vector<CourtPoint> anchors;
        anchors.push_back(*shooter_at_reception);
        bool anchor_missing = false;
        for (std::size_t k = rec + 1; k < rel; ++k) {
            if (ev[k].kind != EventKind::Dribble || ev[k].player != shooter) continue;
            const CourtPoint* p = locate_player(bundle.moments, shooter, ev[k].wall_time_ms);
            if (p == nullptr) {
                anchor_missing = true;
                break;
            }
            anchors.push_back(*p);
        }
        if (anchor_missing) {
            skip(made_ms, "missing dribble anchor moment for " + shooter);
            continue;
        }
        anchors.push_back(*shooter_at_shot);

        double c5 = nearest_defender_distance(bundle, passer, team, t_rel);
        double c6 = nearest_defender_distance(bundle, shooter, team, tr);
        if (c5 < 0.0 || c6 < 0.0) {
            skip(made_ms, "no moment with all five defenders near anchor");
            continue;
        }

        PotentialAssist pa;
        pa.game_id = bundle.game_id;
        pa.passer = passer;
        pa.shooter = shooter;
        pa.team = team;
        pa.opponent = team == bundle.home ? bundle.away : bundle.home;
        pa.is_home = team == bundle.home;
        pa.scorekeeper = bundle.home;
        pa.passer_position = roster.at(passer).position;
        pa.c1_possession_time = c1;
        pa.c2_dribbles = static_cast<int>(anchors.size()) - 2;
        pa.c3_travel_distance = travel_distance(anchors);
        pa.c4_pass_distance = pass_distance(*passer_at_release, *shooter_at_reception);
        pa.c5_passer_defender_dist = c5;
        pa.c6_shooter_defender_dist = c6;
        pa.c7_passer_zone = zone_of(*passer_at_release);
        pa.c8_shooter_zone = zone_of(*shooter_at_reception);
        pa.label_recorded_assist = label_index.count({made_ms, passer}) != 0;
        pa.shot_wall_time_ms = made_ms;
        out.records.push_back(std::move(pa));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {
const std::vector<std::string> kPaHeader = {
    "game_id", "passer", "shooter", "team", "opponent", "is_home", "scorekeeper",
    "passer_position", "c1_possession_time_s", "c2_dribbles", "c3_travel_ft",
    "c4_pass_ft", "c5_passer_defender_ft", "c6_shooter_defender_ft",
    "c7_passer_zone", "c8_shooter_zone", "label_recorded_assist", "shot_wall_time_ms"};
}

void write_potential_assists(const std::string& path,
                             const std::vector<PotentialAssist>& records) {
    csv::Writer w(path);
    w.write_row(kPaHeader);
    for (const auto& r : records) {
        w.write_row({r.game_id, r.passer, r.shooter, r.team, r.opponent,
                     r.is_home ? "1" : "0", r.scorekeeper,
                     position_code(r.passer_position),
                     csv::format_double(r.c1_possession_time),
                     std::to_string(r.c2_dribbles),
                     csv::format_double(r.c3_travel_distance),
                     csv::format_double(r.c4_pass_distance),
                     csv::format_double(r.c5_passer_defender_dist),
                     csv::format_double(r.c6_shooter_defender_dist),
                     zone_name(r.c7_passer_zone), zone_name(r.c8_shooter_zone),
                     r.label_recorded_assist ? "1" : "0",
                     std::to_string(r.shot_wall_time_ms)});
    }
    w.close();
}

std::vector<PotentialAssist> load_potential_assists(const std::string& path) {
    auto t = csv::Table::read_file(path, kPaHeader);
    std::vector<PotentialAssist> out;
    out.reserve(t.rows().size());
    for (const auto& row : t.rows()) {
        PotentialAssist r;
        r.game_id = row.fields[0];
        r.passer = row.fields[1];
        r.shooter = row.fields[2];
        r.team = row.fields[3];
        r.opponent = row.fields[4];
        r.is_home = csv::parse_bool_field(row, 5, "is_home");
        r.scorekeeper = row.fields[6];
        r.passer_position = parse_position(row.fields[7]);
        r.c1_possession_time = csv::parse_double_field(row, 8, "c1");
        r.c2_dribbles = static_cast<int>(csv::parse_int_field(row, 9, "c2"));
        r.c3_travel_distance = csv::parse_double_field(row, 10, "c3");
        r.c4_pass_distance = csv::parse_double_field(row, 11, "c4");
        r.c5_passer_defender_dist = csv::parse_double_field(row, 12, "c5");
        r.c6_shooter_defender_dist = csv::parse_double_field(row, 13, "c6");
        r.c7_passer_zone = parse_zone(row.fields[14]);
        r.c8_shooter_zone = parse_zone(row.fields[15]);
        r.label_recorded_assist = csv::parse_bool_field(row, 16, "label");
        r.shot_wall_time_ms = csv::parse_int_field(row, 17, "shot_wall_time_ms");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hoops
