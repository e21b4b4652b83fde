#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hoops/design.hpp"
#include "hoops/features.hpp"
#include "hoops/ingest.hpp"
#include "hoops/synth.hpp"

#include "test_util.hpp"

using namespace hoops;

namespace {

// Match a generated covariate table against what the extraction pipeline
// recovers from the same game's tracking and event streams.
void expect_closure(const SynthGame& game, const Roster& roster) {
    auto result = extract_potential_assists(game.bundle, roster, game.labels);
    REQUIRE(result.diagnostics.empty());
    REQUIRE(result.records.size() == game.truth_rows.size());
    for (size_t i = 0; i < result.records.size(); ++i) {
        const auto& got = result.records[i];
        const auto& want = game.truth_rows[i];
        CHECK(got.passer == want.passer);
        CHECK(got.shooter == want.shooter);
        CHECK(got.team == want.team);
        CHECK(got.is_home == want.is_home);
        CHECK(got.label_recorded_assist == want.label_recorded_assist);
        CHECK(std::abs(got.c1_possession_time - want.c1_possession_time) < 1e-9);
        CHECK(got.c2_dribbles == want.c2_dribbles);
        CHECK(std::abs(got.c3_travel_distance - want.c3_travel_distance) < 1e-9);
        CHECK(std::abs(got.c4_pass_distance - want.c4_pass_distance) < 1e-9);
        CHECK(std::abs(got.c5_passer_defender_dist - want.c5_passer_defender_dist) < 1e-9);
        CHECK(std::abs(got.c6_shooter_defender_dist - want.c6_shooter_defender_dist) < 1e-9);
        CHECK(got.c7_passer_zone == want.c7_passer_zone);
        CHECK(got.c8_shooter_zone == want.c8_shooter_zone);
    }
}

}  // namespace

TEST_CASE("league fixtures are well formed") {
    auto teams = league_teams();
    CHECK(teams.size() == 30);
    CHECK(std::is_sorted(teams.begin(), teams.end()));
    auto roster = league_roster();
    CHECK(roster.entries().size() == 150);
    std::map<TeamId, int> per_team;
    for (const auto& e : roster.entries()) ++per_team[e.team];
    for (const auto& [t, n] : per_team) CHECK(n == 5);

    auto sched = make_schedule(45);
    CHECK(sched.size() == 45);
    for (const auto& g : sched) CHECK(g.home != g.away);
    CHECK(sched[0].id < sched[1].id);
}

TEST_CASE("generation is deterministic in the seed") {
    GroundTruth truth = default_truth(4);
    auto sched = make_schedule(2);
    auto roster = league_roster();
    auto a = generate_game(truth, sched[0], roster, game_seed(9, 0));
    auto b = generate_game(truth, sched[0], roster, game_seed(9, 0));
    REQUIRE(a.truth_rows.size() == b.truth_rows.size());
    CHECK(a.bundle.moments.size() == b.bundle.moments.size());
    for (size_t i = 0; i < a.truth_rows.size(); ++i) {
        CHECK(a.truth_rows[i].passer == b.truth_rows[i].passer);
        CHECK(a.truth_rows[i].c1_possession_time == b.truth_rows[i].c1_possession_time);
        CHECK(a.truth_rows[i].label_recorded_assist ==
              b.truth_rows[i].label_recorded_assist);
    }
    auto c = generate_game(truth, sched[0], roster, game_seed(9, 1));
    bool identical = a.truth_rows.size() == c.truth_rows.size();
    if (identical)
        for (size_t i = 0; i < a.truth_rows.size(); ++i)
            identical = identical && a.truth_rows[i].c1_possession_time ==
                                         c.truth_rows[i].c1_possession_time;
    CHECK_FALSE(identical);
}

TEST_CASE("written seasons are byte-identical across runs") {
    GroundTruth truth = default_truth(1);
    truth.possessions_per_game = 6;
    testutil::TempDir d1, d2;
    write_season(d1.path().string(), truth, 3, 77);
    write_season(d2.path().string(), truth, 3, 77);
    for (const char* f : {"moments.csv", "events.csv", "box.csv", "roster.csv",
                          "assists.csv", "ground_truth.json"}) {
        auto one = testutil::read_file(d1.file(f));
        CHECK(!one.empty());
        CHECK(one == testutil::read_file(d2.file(f)));
    }
}

TEST_CASE("label rate tracks the planted intercept") {
    auto roster = league_roster();
    auto sched = make_schedule(5);

    GroundTruth zero;  // all-zero model: every pass is a fair coin
    zero.possessions_per_game = 400;
    long n = 0, pos = 0;
    for (int g = 0; g < 5; ++g) {
        auto game = generate_game(zero, sched[g], roster, game_seed(3, g));
        for (const auto& r : game.truth_rows) {
            ++n;
            pos += r.label_recorded_assist ? 1 : 0;
        }
    }
    double rate = double(pos) / double(n);
    CHECK(rate == doctest::Approx(0.5).epsilon(0.025));

    GroundTruth lifted;
    lifted.intercept = 0.645;
    lifted.possessions_per_game = 400;
    n = pos = 0;
    for (int g = 0; g < 5; ++g) {
        auto game = generate_game(lifted, sched[g], roster, game_seed(3, g));
        for (const auto& r : game.truth_rows) {
            ++n;
            pos += r.label_recorded_assist ? 1 : 0;
        }
    }
    rate = double(pos) / double(n);
    CHECK(rate == doctest::Approx(1.0 / (1.0 + std::exp(-0.645))).epsilon(0.025));
}

TEST_CASE("generated games close the loop through the extraction pipeline") {
    GroundTruth truth = default_truth(12);
    truth.possessions_per_game = 40;
    auto roster = league_roster();
    auto sched = make_schedule(4);
    for (int g = 0; g < 4; ++g)
        expect_closure(generate_game(truth, sched[g], roster, game_seed(21, g)), roster);
}

TEST_CASE("written seasons reload through the ingest layer") {
    GroundTruth truth = default_truth(2);
    truth.possessions_per_game = 8;
    testutil::TempDir dir;
    write_season(dir.path().string(), truth, 3, 5);

    auto roster = load_roster(dir.file("roster.csv"));
    auto games = load_games(dir.file("moments.csv"), dir.file("events.csv"),
                            dir.file("box.csv"), roster);
    auto labels = load_labels(dir.file("assists.csv"));
    REQUIRE(games.size() == 3);

    // The loaded (re-normalized) games must extract the same covariates as
    // the in-memory generator output.
    auto direct = generate_season(truth, 3, 5);
    for (size_t g = 0; g < games.size(); ++g) {
        auto from_disk = extract_potential_assists(games[g], roster, labels);
        REQUIRE(from_disk.diagnostics.empty());
        REQUIRE(from_disk.records.size() == direct[g].truth_rows.size());
        for (size_t i = 0; i < from_disk.records.size(); ++i) {
            const auto& got = from_disk.records[i];
            const auto& want = direct[g].truth_rows[i];
            CHECK(std::abs(got.c3_travel_distance - want.c3_travel_distance) < 1e-9);
            CHECK(std::abs(got.c5_passer_defender_dist - want.c5_passer_defender_dist) <
                  1e-9);
            CHECK(got.c7_passer_zone == want.c7_passer_zone);
            CHECK(got.label_recorded_assist == want.label_recorded_assist);
        }
    }

    GroundTruth loaded = GroundTruth::load(dir.file("ground_truth.json"));
    CHECK(loaded.intercept == truth.intercept);
}

TEST_CASE("ground truth round-trips through json") {
    GroundTruth truth = default_truth(99);
    GroundTruth back = GroundTruth::from_json(truth.to_json());
    CHECK(back.intercept == truth.intercept);
    CHECK(back.home == truth.home);
    CHECK(back.c == truth.c);
    CHECK(back.team == truth.team);
    CHECK(back.sk_bias == truth.sk_bias);
    CHECK(back.passer == truth.passer);
    CHECK(back.position == truth.position);
    CHECK(back.zone_pair == truth.zone_pair);
    CHECK(back.possessions_per_game == truth.possessions_per_game);
}

TEST_CASE("default truth plants centered, identifiable effects") {
    GroundTruth truth = default_truth(7);
    auto center_ok = [](const std::map<std::string, double>& m) {
        double s = 0.0;
        for (const auto& [k, v] : m) s += v;
        return std::abs(s) < 1e-9;
    };
    CHECK(center_ok(truth.team));
    CHECK(center_ok(truth.opponent));
    CHECK(center_ok(truth.sk_generosity));
    CHECK(center_ok(truth.sk_bias));
    double zp_row = 0.0;
    for (int b = 0; b < kNumZones; ++b) zp_row += truth.zone_pair[0][b];
    CHECK(std::abs(zp_row) < 1e-9);
    // Scorekeeper effects must be non-trivial so recovery has signal.
    double max_gen = 0.0;
    for (const auto& [k, v] : truth.sk_generosity) max_gen = std::max(max_gen, std::abs(v));
    CHECK(max_gen > 0.01);
}

TEST_CASE("recovery report against the truth itself is perfect") {
    GroundTruth truth = default_truth(3);
    // Express the truth as a ModelFit and ask how well it matches itself.
    ModelFit fit;
    fit.fit_kind = "logistic";
    auto scalar = [&](const std::string& n, double v) {
        fit.groups.push_back({n, {"value"}, {v}});
    };
    scalar("intercept", truth.intercept);
    scalar("home", truth.home);
    for (int k = 0; k < 6; ++k) scalar("c" + std::to_string(k + 1), truth.c[k]);
    auto level_group = [&](const std::string& n, const std::map<std::string, double>& m) {
        ModelFit::Group g;
        g.name = n;
        for (const auto& [k, v] : m) {
            g.levels.push_back(k);
            g.values.push_back(v);
        }
        fit.groups.push_back(std::move(g));
    };
    level_group("team", truth.team);
    level_group("opponent", truth.opponent);
    level_group("sk_generosity", truth.sk_generosity);
    level_group("sk_bias", truth.sk_bias);
    level_group("passer", truth.passer);
    {
        ModelFit::Group g{"position", {}, {}};
        for (int p = 0; p < kNumPositions; ++p) {
            g.levels.push_back(position_code(static_cast<Position>(p)));
            g.values.push_back(truth.position[p]);
        }
        fit.groups.push_back(g);
    }
    const std::pair<const char*, const std::array<double, 6>*> zone_groups[] = {
        {"passer_zone", &truth.passer_zone}, {"shooter_zone", &truth.shooter_zone}};
    for (auto [name, arr] : zone_groups) {
        ModelFit::Group g{name, {}, {}};
        for (int z = 0; z < kNumZones; ++z) {
            g.levels.push_back(zone_name(static_cast<CourtZone>(z)));
            g.values.push_back((*arr)[z]);
        }
        fit.groups.push_back(g);
    }
    {
        ModelFit::Group g{"zone_pair", {}, {}};
        for (int a = 0; a < kNumZones; ++a)
            for (int b = 0; b < kNumZones; ++b) {
                g.levels.push_back(zone_pair_level(static_cast<CourtZone>(a),
                                                   static_cast<CourtZone>(b)));
                g.values.push_back(truth.zone_pair[a][b]);
            }
        fit.groups.push_back(g);
    }

    auto rows = recovery_report(truth, fit);
    REQUIRE(!rows.empty());
    for (const auto& r : rows) {
        INFO(r.group);
        CHECK(r.correlation == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.rmse < 1e-12);
    }
}
