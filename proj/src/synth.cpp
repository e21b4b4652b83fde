#include "hoops/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "hoops/csv.hpp"
#include "hoops/design.hpp"
#include "hoops/errors.hpp"
#include "hoops/features.hpp"
#include "hoops/geometry.hpp"

namespace hoops {

namespace {

double map_at(const std::map<std::string, double>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

int zi(CourtZone z) { return static_cast<int>(z); }

// A jittered point strictly inside the zone, with margin against every
// boundary so reflection round-off can never reclassify it.
CourtPoint sample_zone(CourtZone z, std::mt19937_64& rng) {
    auto u = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    CourtPoint p;
    switch (z) {
        case CourtZone::Dunk: {
            double r = u(0.5, 2.5), a = u(0.0, 2.0 * 3.14159265358979323846);
            p = {court::kBasketX + r * std::cos(a), court::kBasketY + r * std::sin(a)};
            break;
        }
        case CourtZone::Paint:
            p = {u(9.0, 18.5), u(18.0, 32.0)};
            break;
        case CourtZone::Long2:
            p = {u(19.5, 26.0), u(21.0, 29.0)};
            break;
        case CourtZone::Arc3:
            p = {u(30.0, 35.0), u(20.0, 30.0)};
            break;
        case CourtZone::Corner3:
            p = {u(5.0, 13.0), rng() % 2 == 0 ? u(0.5, 2.5) : u(47.5, 49.5)};
            break;
        case CourtZone::Heave:
            // Kept near midcourt so a shot scripted off this point stays on
            // the attacking half and the loader never re-orients the window.
            p = {u(45.0, 46.0), u(15.0, 35.0)};
            break;
    }
    if (zone_of(p) != z)
        throw InvalidInputError("synth: sampled point missed its zone");
    return p;
}

// A point at exactly `dist` feet from `from`, heading toward midcourt so the
// result stays on the floor.
CourtPoint defender_at(const CourtPoint& from, double dist) {
    double dx = court::kLength / 2.0 - from.x;
    double dy = court::kBasketY - from.y;
    double norm = std::hypot(dx, dy);
    if (norm < 1e-9) {
        dx = -1.0;
        dy = 0.0;
        norm = 1.0;
    }
    return {from.x + dist * dx / norm, from.y + dist * dy / norm};
}

struct GameScript {
    const GroundTruth* truth;
    ScheduleEntry entry;
    std::vector<PlayerId> players[2];  // [0]=home, [1]=away
    std::mt19937_64 rng;

    GameBundle bundle;
    std::vector<AssistLabel> labels;
    std::vector<PotentialAssist> rows;
    std::int64_t cursor = 1000;
    int total_poss = 0, done_poss = 0;
    int fgm[2] = {}, fga_extra[2] = {}, ast[2] = {};

    int uid(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }
    double u(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    int quarter() const {
        return 1 + std::min(3, 4 * done_poss / std::max(1, total_poss));
    }

    // One tracking sample with all ten players and the ball. `overrides`
    // pins the players the covariates are measured from.
    void add_moment(std::int64_t t,
                    const std::vector<std::pair<PlayerId, CourtPoint>>& overrides,
                    const CourtPoint& ball) {
        Moment m;
        m.game_id = entry.id;
        m.quarter = quarter();
        m.wall_time_ms = t;
        m.game_clock_s = 720.0 - std::fmod(static_cast<double>(t) / 1000.0, 720.0);
        for (int side = 0; side < 2; ++side) {
            for (int i = 0; i < 5; ++i) {
                MomentEntity e;
                e.kind = EntityKind::Player;
                e.team = side == 0 ? entry.home : entry.away;
                e.player = players[side][i];
                e.pos = {side == 0 ? 88.0 : 84.0, 12.0 + 6.0 * i};
                for (const auto& [id, pos] : overrides)
                    if (id == e.player) e.pos = pos;
                m.entities.push_back(std::move(e));
            }
        }
        MomentEntity b;
        b.kind = EntityKind::Ball;
        b.pos = ball;
        b.pos.z = 5.0;
        m.entities.push_back(std::move(b));
        bundle.moments.push_back(std::move(m));
    }

    void add_event(std::int64_t t, EventKind k, int side, const PlayerId& player) {
        EventRecord ev;
        ev.game_id = entry.id;
        ev.wall_time_ms = t;
        ev.kind = k;
        ev.team = side == 0 ? entry.home : entry.away;
        ev.player = player;
        bundle.events.push_back(std::move(ev));
    }

    // Mirrors the possession's own moments so the raw file exercises the
    // loader's orientation normalization.
    void mirror_from(std::size_t first_moment) {
        for (std::size_t i = first_moment; i < bundle.moments.size(); ++i) {
            for (auto& e : bundle.moments[i].entities) {
                e.pos.x = court::kLength - e.pos.x;
                e.pos.y = court::kWidth - e.pos.y;
            }
        }
    }

    void qualifying_possession(int p) {
        const int side = p % 2;
        // Zones are drawn, not cycled with p: the attacking side alternates
        // with p, and any zone cycle whose period shares a factor with 2
        // confounds the shooter zone with the home indicator.
        const CourtZone pzone = static_cast<CourtZone>(uid(0, kNumZones - 1));
        const CourtZone szone = static_cast<CourtZone>(uid(0, kNumZones - 1));
        const int pi = uid(0, 4);
        const int si = (pi + 1 + uid(0, 3)) % 5;
        const PlayerId& passer = players[side][pi];
        const PlayerId& shooter = players[side][si];

        CourtPoint pp = sample_zone(pzone, rng);
        CourtPoint pr = sample_zone(szone, rng);
        const int n_d = uid(0, 3);
        // Drive length in feet is drawn independently of the reception spot,
        // so travel distance is not a near-deterministic image of the
        // reception zone (which would let its coefficient soak up zone signal).
        const double to_basket = distance(pr, {court::kBasketX, court::kBasketY});
        const double drive = std::min(u(1.0, 6.0) + 1.5 * n_d, 0.9 * to_basket);
        const double frac = drive / to_basket;
        CourtPoint ps = {pr.x + frac * (court::kBasketX - pr.x),
                         pr.y + frac * (court::kBasketY - pr.y)};

        const std::int64_t t_rel = cursor;
        const std::int64_t tr = t_rel + uid(400, 1200);
        const std::int64_t hold = uid(500, 6300);
        const std::int64_t ts = tr + hold;
        const std::int64_t made = ts + uid(400, 800);
        cursor = made + 1500;

        const double c5_t = u(1.0, 12.0);
        const double c6_t = u(1.0, 12.0);
        CourtPoint d_passer = defender_at(pp, c5_t);
        CourtPoint d_shooter = defender_at(pr, c6_t);
        const PlayerId& defender = players[1 - side][0];

        std::vector<CourtPoint> anchors;
        anchors.push_back(pr);
        std::vector<std::int64_t> dribble_ts;
        for (int i = 0; i < n_d; ++i) {
            double f = static_cast<double>(i + 1) / (n_d + 1);
            anchors.push_back({pr.x + f * (ps.x - pr.x), pr.y + f * (ps.y - pr.y)});
            dribble_ts.push_back(tr + hold * (i + 1) / (n_d + 1));
        }
        anchors.push_back(ps);

        const std::size_t first_moment = bundle.moments.size();
        add_moment(t_rel, {{passer, pp}, {shooter, pr}, {defender, d_passer}}, pp);
        add_moment(tr, {{passer, pp}, {shooter, pr}, {defender, d_shooter}}, pr);
        for (int i = 0; i < n_d; ++i)
            add_moment(dribble_ts[i],
                       {{passer, pp}, {shooter, anchors[i + 1]}, {defender, d_shooter}},
                       anchors[i + 1]);
        add_moment(ts, {{passer, pp}, {shooter, ps}, {defender, d_shooter}}, ps);

        add_event(t_rel, EventKind::PassRelease, side, passer);
        add_event(tr, EventKind::PassReceive, side, shooter);
        for (std::int64_t dt : dribble_ts) add_event(dt, EventKind::Dribble, side, shooter);
        add_event(ts, EventKind::ShotRelease, side, shooter);
        add_event(made, EventKind::ShotMade, side, shooter);
        ++fgm[side];

        if (p % 3 == 2 && ps.x < 46.0) mirror_from(first_moment);

        PotentialAssist pa;
        pa.game_id = entry.id;
        pa.passer = passer;
        pa.shooter = shooter;
        pa.team = side == 0 ? entry.home : entry.away;
        pa.opponent = side == 0 ? entry.away : entry.home;
        pa.is_home = side == 0;
        pa.scorekeeper = entry.home;
        pa.passer_position = static_cast<Position>(pi);
        pa.c1_possession_time = possession_time(tr, ts);
        pa.c2_dribbles = n_d;
        pa.c3_travel_distance = travel_distance(anchors);
        pa.c4_pass_distance = pass_distance(pp, pr);
        pa.c5_passer_defender_dist = distance(pp, d_passer);
        pa.c6_shooter_defender_dist = distance(pr, d_shooter);
        pa.c7_passer_zone = pzone;
        pa.c8_shooter_zone = szone;
        pa.shot_wall_time_ms = made;
        if (pa.c1_possession_time <= 0.0 || pa.c1_possession_time > 7.0)
            throw InvalidInputError("synth: scripted possession time out of range");

        const double prob = sigmoid(truth->eta(pa));
        pa.label_recorded_assist = std::bernoulli_distribution(prob)(rng);
        if (pa.label_recorded_assist) {
            labels.push_back({entry.id, made, passer});
            ++ast[side];
        }
        rows.push_back(std::move(pa));
    }

    // Possessions the extractor must reject: a solo drive, an inbound catch
    // and an eventual miss. They still feed the box score.
    void extra_possessions() {
        {
            const int side = 0;
            const PlayerId& shooter = players[side][uid(0, 4)];
            CourtPoint ps = sample_zone(CourtZone::Paint, rng);
            std::int64_t t0 = cursor, ts = t0 + 800, made = ts + 500;
            add_moment(ts, {{shooter, ps}}, ps);
            add_event(t0, EventKind::Dribble, side, shooter);
            add_event(ts, EventKind::ShotRelease, side, shooter);
            add_event(made, EventKind::ShotMade, side, shooter);
            ++fgm[side];
            cursor = made + 1500;
        }
        {
            const int side = 1;
            const PlayerId& passer = players[side][0];
            const PlayerId& shooter = players[side][1];
            CourtPoint pr = sample_zone(CourtZone::Long2, rng);
            std::int64_t t0 = cursor, tr = t0 + 500, ts = t0 + 1000, made = t0 + 1500;
            add_moment(tr, {{shooter, pr}}, pr);
            add_moment(ts, {{shooter, pr}}, pr);
            add_event(t0, EventKind::InboundPass, side, passer);
            add_event(tr, EventKind::PassReceive, side, shooter);
            add_event(ts, EventKind::ShotRelease, side, shooter);
            add_event(made, EventKind::ShotMade, side, shooter);
            ++fgm[side];
            cursor = made + 1500;
        }
        {
            const int side = 0;
            const PlayerId& passer = players[side][2];
            const PlayerId& shooter = players[side][3];
            CourtPoint pr = sample_zone(CourtZone::Arc3, rng);
            std::int64_t t0 = cursor, tr = t0 + 500, ts = t0 + 1200;
            add_moment(tr, {{shooter, pr}}, pr);
            add_moment(ts, {{shooter, pr}}, pr);
            add_event(t0, EventKind::PassRelease, side, passer);
            add_event(tr, EventKind::PassReceive, side, shooter);
            add_event(ts, EventKind::ShotRelease, side, shooter);
            add_event(ts + 500, EventKind::ShotMissed, side, shooter);
            add_event(ts + 1000, EventKind::Rebound, 1 - side, players[1 - side][2]);
            ++fga_extra[side];
            cursor = ts + 2500;
        }
    }

    SynthGame run() {
        bundle.game_id = entry.id;
        bundle.date = "2026-01-01";
        bundle.home = entry.home;
        bundle.away = entry.away;
        total_poss = truth->possessions_per_game + 3;
        for (int p = 0; p < truth->possessions_per_game; ++p) {
            qualifying_possession(p);
            ++done_poss;
        }
        extra_possessions();
        done_poss += 3;

        for (int side = 0; side < 2; ++side) {
            BoxLine b;
            b.game_id = entry.id;
            b.date = bundle.date;
            b.team = side == 0 ? entry.home : entry.away;
            b.opponent = side == 0 ? entry.away : entry.home;
            b.is_home = side == 0;
            b.fgm = fgm[side];
            b.fga = fgm[side] + fga_extra[side];
            b.ast = ast[side];
            b.blk = uid(0, 8);
            bundle.box.push_back(std::move(b));
        }
        SynthGame g;
        g.bundle = std::move(bundle);
        g.labels = std::move(labels);
        g.truth_rows = std::move(rows);
        return g;
    }
};

SynthGame generate_game_raw(const GroundTruth& truth, const ScheduleEntry& entry,
                            const Roster& roster, std::uint64_t seed) {
    GameScript s;
    s.truth = &truth;
    s.entry = entry;
    s.rng.seed(seed);
    for (const auto& e : roster.entries()) {
        if (e.team == entry.home) s.players[0].push_back(e.player);
        if (e.team == entry.away) s.players[1].push_back(e.player);
    }
    if (s.players[0].size() != 5 || s.players[1].size() != 5)
        throw InvalidInputError("synth: each team needs exactly five rostered players");
    return s.run();
}

}  // namespace

double GroundTruth::eta(const PotentialAssist& pa) const {
    double v = intercept;
    if (pa.is_home) v += home + map_at(sk_bias, pa.scorekeeper);
    v += map_at(team, pa.team) + map_at(opponent, pa.opponent) +
         map_at(sk_generosity, pa.scorekeeper) + map_at(passer, pa.passer);
    v += position[static_cast<int>(pa.passer_position)];
    for (int k = 0; k < 6; ++k) v += c[k] * continuous_value(pa, k);
    v += passer_zone[zi(pa.c7_passer_zone)] + shooter_zone[zi(pa.c8_shooter_zone)];
    v += zone_pair[zi(pa.c7_passer_zone)][zi(pa.c8_shooter_zone)];
    return v;
}

std::vector<TeamId> league_teams() {
    std::vector<TeamId> teams;
    for (int i = 1; i <= 30; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "T%02d", i);
        teams.emplace_back(buf);
    }
    return teams;
}

Roster league_roster() {
    Roster r;
    for (const auto& t : league_teams()) {
        for (int p = 0; p < kNumPositions; ++p) {
            RosterEntry e;
            e.position = static_cast<Position>(p);
            e.player = t + "_" + position_code(e.position);
            e.name = e.player;
            e.team = t;
            r.add(std::move(e));
        }
    }
    return r;
}

GroundTruth default_truth(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto normal = [&](double sd) {
        return std::normal_distribution<double>(0.0, sd)(rng);
    };
    auto center = [](std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double& x : v) x -= m;
    };

    GroundTruth t;
    t.intercept = 0.645;
    t.home = 0.1;
    t.c = {-0.22, -0.07, 0.012, 0.014, 0.03, 0.02};

    auto teams = league_teams();
    auto fill = [&](std::map<TeamId, double>& m, double sd) {
        std::vector<double> v(teams.size());
        for (auto& x : v) x = normal(sd);
        center(v);
        for (std::size_t i = 0; i < teams.size(); ++i) m[teams[i]] = v[i];
    };
    fill(t.team, 0.15);
    fill(t.opponent, 0.12);
    fill(t.sk_generosity, 0.3);
    fill(t.sk_bias, 0.3);

    {
        std::vector<double> v(kNumPositions);
        for (auto& x : v) x = normal(0.25);
        center(v);
        for (int p = 0; p < kNumPositions; ++p) t.position[p] = v[p];
    }
    // passer effects, centered within each position so they stay separable
    // from the position effects under the ridge penalty
    for (int p = 0; p < kNumPositions; ++p) {
        std::vector<double> v(teams.size());
        for (auto& x : v) x = normal(0.2);
        center(v);
        const char* code = position_code(static_cast<Position>(p));
        for (std::size_t i = 0; i < teams.size(); ++i)
            t.passer[teams[i] + "_" + code] = v[i];
    }
    {
        std::vector<double> v(kNumZones);
        for (auto& x : v) x = normal(0.35);
        center(v);
        for (int z = 0; z < kNumZones; ++z) t.passer_zone[z] = v[z];
        // larger spread: the reception zone shares signal with the travel and
        // pass-distance covariates, so its main effect needs more headroom
        for (auto& x : v) x = normal(0.5);
        center(v);
        for (int z = 0; z < kNumZones; ++z) t.shooter_zone[z] = v[z];
    }
    {
        // doubly centered so the surface carries no marginal zone signal
        double a[kNumZones][kNumZones];
        double row[kNumZones] = {}, col[kNumZones] = {}, grand = 0.0;
        for (int i = 0; i < kNumZones; ++i)
            for (int j = 0; j < kNumZones; ++j) {
                a[i][j] = normal(0.4);
                row[i] += a[i][j] / kNumZones;
                col[j] += a[i][j] / kNumZones;
                grand += a[i][j] / (kNumZones * kNumZones);
            }
        for (int i = 0; i < kNumZones; ++i)
            for (int j = 0; j < kNumZones; ++j)
                t.zone_pair[i][j] = a[i][j] - row[i] - col[j] + grand;
    }
    return t;
}

std::vector<ScheduleEntry> make_schedule(int n_games) {
    if (n_games < 1) throw InvalidInputError("make_schedule: n_games must be >= 1");
    auto teams = league_teams();
    const int n = static_cast<int>(teams.size());
    std::vector<ScheduleEntry> out;
    out.reserve(n_games);
    for (int g = 0; g < n_games; ++g) {
        ScheduleEntry e;
        char buf[16];
        std::snprintf(buf, sizeof buf, "G%05d", g + 1);
        e.id = buf;
        int h = g % n;
        int offset = 1 + (g / n) % (n - 1);
        e.home = teams[h];
        e.away = teams[(h + offset) % n];
        out.push_back(std::move(e));
    }
    return out;
}

std::uint64_t game_seed(std::uint64_t season_seed, int game_index) {
    std::uint64_t z =
        season_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(game_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SynthGame generate_game(const GroundTruth& truth, const ScheduleEntry& entry,
                        const Roster& roster, std::uint64_t seed) {
    SynthGame g = generate_game_raw(truth, entry, roster, seed);
    normalize_coordinates(g.bundle);
    return g;
}

std::vector<SynthGame> generate_season(const GroundTruth& truth, int n_games,
                                       std::uint64_t seed) {
    auto schedule = make_schedule(n_games);
    auto roster = league_roster();
    std::vector<SynthGame> out;
    out.reserve(schedule.size());
    for (int g = 0; g < n_games; ++g)
        out.push_back(generate_game(truth, schedule[g], roster, game_seed(seed, g)));
    return out;
}

void write_season(const std::string& dir, const GroundTruth& truth, int n_games,
                  std::uint64_t seed) {
    auto schedule = make_schedule(n_games);
    auto roster = league_roster();
    GameWriter writer(dir);
    std::vector<AssistLabel> labels;
    for (int g = 0; g < n_games; ++g) {
        SynthGame game =
            generate_game_raw(truth, schedule[g], roster, game_seed(seed, g));
        writer.add(game.bundle);
        labels.insert(labels.end(), game.labels.begin(), game.labels.end());
    }
    writer.close();
    write_roster(dir + "/roster.csv", roster);
    write_labels(dir + "/assists.csv", labels);
    truth.save(dir + "/ground_truth.json");
}

// ---------------------------------------------------------------------------
// Ground-truth serialization

using nlohmann::json;

std::string GroundTruth::to_json() const {
    json j;
    j["intercept"] = intercept;
    j["home"] = home;
    for (int k = 0; k < 6; ++k) j["c" + std::to_string(k + 1)] = c[k];
    j["team"] = team;
    j["opponent"] = opponent;
    j["sk_generosity"] = sk_generosity;
    j["sk_bias"] = sk_bias;
    j["passer"] = passer;
    json pos = json::object();
    for (int p = 0; p < kNumPositions; ++p)
        pos[position_code(static_cast<Position>(p))] = position[p];
    j["position"] = std::move(pos);
    json pz = json::object(), sz = json::object(), zp = json::object();
    for (int z = 0; z < kNumZones; ++z) {
        pz[zone_name(static_cast<CourtZone>(z))] = passer_zone[z];
        sz[zone_name(static_cast<CourtZone>(z))] = shooter_zone[z];
    }
    for (int i = 0; i < kNumZones; ++i)
        for (int k = 0; k < kNumZones; ++k)
            zp[zone_pair_level(static_cast<CourtZone>(i), static_cast<CourtZone>(k))] =
                zone_pair[i][k];
    j["passer_zone"] = std::move(pz);
    j["shooter_zone"] = std::move(sz);
    j["zone_pair"] = std::move(zp);
    j["possessions_per_game"] = possessions_per_game;
    return j.dump(2) + "\n";
}

GroundTruth GroundTruth::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ground truth JSON: ") + e.what());
    }
    GroundTruth t;
    try {
        t.intercept = j.at("intercept").get<double>();
        t.home = j.at("home").get<double>();
        for (int k = 0; k < 6; ++k) t.c[k] = j.at("c" + std::to_string(k + 1)).get<double>();
        t.team = j.at("team").get<std::map<TeamId, double>>();
        t.opponent = j.at("opponent").get<std::map<TeamId, double>>();
        t.sk_generosity = j.at("sk_generosity").get<std::map<TeamId, double>>();
        t.sk_bias = j.at("sk_bias").get<std::map<TeamId, double>>();
        t.passer = j.at("passer").get<std::map<PlayerId, double>>();
        for (int p = 0; p < kNumPositions; ++p)
            t.position[p] =
                j.at("position").at(position_code(static_cast<Position>(p))).get<double>();
        for (int z = 0; z < kNumZones; ++z) {
            const char* zn = zone_name(static_cast<CourtZone>(z));
            t.passer_zone[z] = j.at("passer_zone").at(zn).get<double>();
            t.shooter_zone[z] = j.at("shooter_zone").at(zn).get<double>();
        }
        for (int i = 0; i < kNumZones; ++i)
            for (int k = 0; k < kNumZones; ++k)
                t.zone_pair[i][k] =
                    j.at("zone_pair")
                        .at(zone_pair_level(static_cast<CourtZone>(i),
                                            static_cast<CourtZone>(k)))
                        .get<double>();
        t.possessions_per_game = j.at("possessions_per_game").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ground truth JSON: ") + e.what());
    }
    return t;
}

void GroundTruth::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << to_json();
}

GroundTruth GroundTruth::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_json(os.str());
}

// ---------------------------------------------------------------------------
// Recovery

namespace {

double truth_value(const GroundTruth& t, const std::string& group,
                   const std::string& level) {
    if (group == "team") return map_at(t.team, level);
    if (group == "opponent") return map_at(t.opponent, level);
    if (group == "sk_generosity") return map_at(t.sk_generosity, level);
    if (group == "sk_bias") return map_at(t.sk_bias, level);
    if (group == "passer") return map_at(t.passer, level);
    if (group == "position") return t.position[static_cast<int>(parse_position(level))];
    if (group == "passer_zone") return t.passer_zone[zi(parse_zone(level))];
    if (group == "shooter_zone") return t.shooter_zone[zi(parse_zone(level))];
    if (group == "zone_pair") {
        auto colon = level.find(':');
        if (colon == std::string::npos)
            throw InvalidInputError("recovery: bad zone pair level " + level);
        return t.zone_pair[zi(parse_zone(level.substr(0, colon)))]
                          [zi(parse_zone(level.substr(colon + 1)))];
    }
    throw InvalidInputError("recovery: unknown group " + group);
}

}  // namespace

std::vector<RecoveryRow> recovery_report(const GroundTruth& truth, const ModelFit& fit) {
    static const char* kGroups[] = {"team",         "opponent",   "sk_generosity",
                                    "sk_bias",      "passer",     "position",
                                    "passer_zone",  "shooter_zone", "zone_pair"};
    std::vector<RecoveryRow> out;
    for (const char* name : kGroups) {
        const auto* g = fit.find(name);
        if (g == nullptr || g->levels.size() < 2) continue;
        const std::size_t n = g->levels.size();
        std::vector<double> ft(g->values), tr(n);
        for (std::size_t i = 0; i < n; ++i) tr[i] = truth_value(truth, name, g->levels[i]);

        double mf = 0.0, mt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mf += ft[i];
            mt += tr[i];
        }
        mf /= static_cast<double>(n);
        mt /= static_cast<double>(n);
        double sxy = 0.0, sxx = 0.0, syy = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = ft[i] - mf, y = tr[i] - mt;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
            sq += (x - y) * (x - y);
        }
        RecoveryRow r;
        r.group = name;
        r.levels = static_cast<int>(n);
        r.correlation = sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
        r.rmse = std::sqrt(sq / static_cast<double>(n));
        out.push_back(std::move(r));
    }
    {
        // continuous slopes, compared on the raw scale
        RecoveryRow r;
        r.group = "continuous";
        r.levels = 6;
        double sq = 0.0, sxy = 0.0, sxx = 0.0, syy = 0.0, mf = 0.0, mt = 0.0;
        double ft[6], tr[6];
        for (int k = 0; k < 6; ++k) {
            ft[k] = fit.scalar("c" + std::to_string(k + 1));
            tr[k] = truth.c[k];
            mf += ft[k] / 6.0;
            mt += tr[k] / 6.0;
        }
        for (int k = 0; k < 6; ++k) {
            sq += (ft[k] - tr[k]) * (ft[k] - tr[k]);
            sxy += (ft[k] - mf) * (tr[k] - mt);
            sxx += (ft[k] - mf) * (ft[k] - mf);
            syy += (tr[k] - mt) * (tr[k] - mt);
        }
        r.correlation = sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
        r.rmse = std::sqrt(sq / 6.0);
        out.push_back(std::move(r));
    }
    return out;
}

void write_recovery(const std::string& path, const std::vector<RecoveryRow>& rows) {
    csv::Writer w(path);
    w.write_row({"group", "levels", "correlation", "rmse"});
    for (const auto& r : rows)
        w.write_row({r.group, std::to_string(r.levels), csv::format_double(r.correlation),
                     csv::format_double(r.rmse)});
    w.close();
}

}  // namespace hoops
