#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>

#include "hoops/csv.hpp"
#include "hoops/errors.hpp"
#include "hoops/ingest.hpp"
#include "hoops/synth.hpp"
#include "test_util.hpp"

using namespace hoops;
using testutil::TempDir;
using testutil::write_file;

namespace {

const char* kMomentsHeader =
    "game_id,quarter,wall_time_ms,game_clock_s,entity,team_id,player_id,x_ft,y_ft,z_ft\n";
const char* kEventsHeader = "game_id,wall_time_ms,kind,team_id,player_id\n";
const char* kBoxHeader = "game_id,date,team_id,opp_id,is_home,fgm,fga,ast,blk\n";

std::string tiny_roster() {
    std::string s = "player_id,name,team_id,position\n";
    const char* pos[] = {"PG", "SG", "SF", "PF", "C"};
    for (const char* team : {"H", "A"})
        for (int i = 0; i < 5; ++i)
            s += std::string(team) + "_" + pos[i] + "," + team + "_" + pos[i] + "," +
                 team + "," + pos[i] + "\n";
    return s;
}

// ten players + ball at one timestamp
std::string moment_block(const std::string& g, std::int64_t t) {
    std::string s;
    const char* pos[] = {"PG", "SG", "SF", "PF", "C"};
    for (const char* team : {"H", "A"})
        for (int i = 0; i < 5; ++i)
            s += g + ",1," + std::to_string(t) + ",700,player," + team + "," + team +
                 "_" + pos[i] + ",20," + std::to_string(10 + 5 * i) + ",\n";
    s += g + ",1," + std::to_string(t) + ",700,ball,,,20,25,6\n";
    return s;
}

std::string tiny_box(const std::string& g) {
    return std::string(kBoxHeader) + g + ",2026-03-01,H,A,1,10,20,5,2\n" + g +
           ",2026-03-01,A,H,0,8,18,4,1\n";
}

}  // namespace

TEST_CASE("csv doubles round-trip through the shortest form") {
    for (double v : {0.0, 1.0, -3.25, 0.1, 1e-12, 123456.789, 1.82, 20.41}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(2.0) == "2");
}

TEST_CASE("table reader enforces the header and field counts") {
    TempDir d;
    write_file(d.file("a.csv"), "x,y\n1,2\n");
    CHECK_NOTHROW(csv::Table::read_file(d.file("a.csv"), {"x", "y"}));
    CHECK_THROWS_AS(csv::Table::read_file(d.file("a.csv"), {"x", "z"}), ParseError);

    write_file(d.file("b.csv"), "x,y\n1,2,3\n");
    try {
        csv::Table::read_file(d.file("b.csv"), {"x", "y"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(csv::Table::read_file(d.file("missing.csv"), {"x"}), ParseError);
}

TEST_CASE("roster loading rejects bad rows and duplicates") {
    TempDir d;
    write_file(d.file("r.csv"), "player_id,name,team_id,position\np1,Alpha,T1,PG\n");
    Roster r = load_roster(d.file("r.csv"));
    CHECK(r.contains("p1"));
    CHECK(r.at("p1").position == Position::PointGuard);
    CHECK_THROWS_AS(r.at("nope"), ValidationError);

    write_file(d.file("bad.csv"), "player_id,name,team_id,position\np1,Alpha,T1,QB\n");
    CHECK_THROWS_AS(load_roster(d.file("bad.csv")), ParseError);
    write_file(d.file("dup.csv"),
               "player_id,name,team_id,position\np1,A,T1,PG\np1,B,T1,SG\n");
    CHECK_THROWS_AS(load_roster(d.file("dup.csv")), ValidationError);
}

TEST_CASE("box ratios follow the AR and BR definitions") {
    std::vector<BoxLine> box;
    box.push_back({"g1", "2026-03-01", "H", "A", true, 40, 80, 25, 5});
    box.push_back({"g1", "2026-03-01", "A", "H", false, 30, 90, 15, 3});

    auto ar = ratios_from_box(box, RatioKind::AR);
    REQUIRE(ar.size() == 2);
    CHECK(ar[0].value == doctest::Approx(25.0 / 40.0));
    CHECK(ar[1].value == doctest::Approx(15.0 / 30.0));
    CHECK(ar[0].scorekeeper == "H");
    CHECK(ar[1].scorekeeper == "H");

    auto br = ratios_from_box(box, RatioKind::BR);
    REQUIRE(br.size() == 2);
    CHECK(br[0].value == doctest::Approx(5.0 / 90.0));   // H blocks over A attempts
    CHECK(br[1].value == doctest::Approx(3.0 / 80.0));

    // undefined ratios are skipped with a warning, not fabricated
    box[0].fgm = 0;
    box[0].ast = 0;
    std::vector<std::string> warnings;
    auto partial = ratios_from_box(box, RatioKind::AR, &warnings);
    CHECK(partial.size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("FGM = 0") != std::string::npos);
}

TEST_CASE("stream loader validates structure") {
    TempDir d;
    write_file(d.file("roster.csv"), tiny_roster());
    Roster roster = load_roster(d.file("roster.csv"));

    SUBCASE("well-formed single game loads") {
        write_file(d.file("moments.csv"),
                   kMomentsHeader + moment_block("g1", 1000) + moment_block("g1", 2000));
        write_file(d.file("events.csv"), std::string(kEventsHeader) +
                                             "g1,1000,PASS_RELEASE,H,H_PG\n"
                                             "g1,2000,SHOT_MADE,H,H_SG\n");
        write_file(d.file("box.csv"), tiny_box("g1"));
        auto games = load_games(d.file("moments.csv"), d.file("events.csv"),
                                d.file("box.csv"), roster);
        REQUIRE(games.size() == 1);
        CHECK(games[0].home == "H");
        CHECK(games[0].away == "A");
        CHECK(games[0].moments.size() == 2);
        CHECK(games[0].moments[0].entities.size() == 11);
    }

    SUBCASE("game without events is rejected") {
        write_file(d.file("moments.csv"), kMomentsHeader + moment_block("g1", 1000));
        write_file(d.file("events.csv"), kEventsHeader);
        write_file(d.file("box.csv"), tiny_box("g1"));
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        ValidationError);
    }

    SUBCASE("unsorted events are rejected") {
        write_file(d.file("moments.csv"), kMomentsHeader + moment_block("g1", 1000));
        write_file(d.file("events.csv"), std::string(kEventsHeader) +
                                             "g1,2000,SHOT_MADE,H,H_SG\n"
                                             "g1,1000,PASS_RELEASE,H,H_PG\n");
        write_file(d.file("box.csv"), tiny_box("g1"));
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        ValidationError);
    }

    SUBCASE("events referencing unknown players are rejected") {
        write_file(d.file("moments.csv"), kMomentsHeader + moment_block("g1", 1000));
        write_file(d.file("events.csv"),
                   std::string(kEventsHeader) + "g1,1000,SHOT_MADE,H,GHOST\n");
        write_file(d.file("box.csv"), tiny_box("g1"));
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        ValidationError);
    }

    SUBCASE("missing ball beyond one percent is a data-quality failure") {
        std::string m = kMomentsHeader;
        // two moments, one without the ball -> 50% missing
        m += moment_block("g1", 1000);
        std::string noball = moment_block("g1", 2000);
        noball.erase(noball.rfind("g1,1,2000,700,ball"));
        m += noball;
        write_file(d.file("moments.csv"), m);
        write_file(d.file("events.csv"),
                   std::string(kEventsHeader) + "g1,1000,SHOT_MADE,H,H_SG\n");
        write_file(d.file("box.csv"), tiny_box("g1"));
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        DataQualityError);
    }

    SUBCASE("out-of-bounds coordinates are a parse error") {
        std::string m = kMomentsHeader;
        m += "g1,1,1000,700,ball,,,200,25,6\n";
        write_file(d.file("moments.csv"), m);
        write_file(d.file("events.csv"),
                   std::string(kEventsHeader) + "g1,1000,SHOT_MADE,H,H_SG\n");
        write_file(d.file("box.csv"), tiny_box("g1"));
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        ParseError);
    }

    SUBCASE("box lines must pair up") {
        write_file(d.file("moments.csv"), kMomentsHeader + moment_block("g1", 1000));
        write_file(d.file("events.csv"),
                   std::string(kEventsHeader) + "g1,1000,SHOT_MADE,H,H_SG\n");
        write_file(d.file("box.csv"),
                   std::string(kBoxHeader) + "g1,2026-03-01,H,A,1,10,20,5,2\n");
        CHECK_THROWS_AS(load_games(d.file("moments.csv"), d.file("events.csv"),
                                   d.file("box.csv"), roster),
                        ValidationError);
    }
}

TEST_CASE("serialization round-trips through the loader") {
    GroundTruth truth = default_truth(5);
    truth.possessions_per_game = 8;
    auto games = generate_season(truth, 3, 99);

    TempDir d;
    std::vector<GameBundle> bundles;
    for (auto& g : games) bundles.push_back(g.bundle);
    write_games(d.path().string(), bundles);
    write_roster(d.file("roster.csv"), league_roster());

    Roster roster = load_roster(d.file("roster.csv"));
    auto loaded = load_games(d.file("moments.csv"), d.file("events.csv"),
                             d.file("box.csv"), roster);
    REQUIRE(loaded.size() == bundles.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].game_id == bundles[i].game_id);
        CHECK(loaded[i].home == bundles[i].home);
        REQUIRE(loaded[i].moments.size() == bundles[i].moments.size());
        REQUIRE(loaded[i].events.size() == bundles[i].events.size());
        for (std::size_t m = 0; m < loaded[i].moments.size(); ++m) {
            const auto& a = loaded[i].moments[m];
            const auto& b = bundles[i].moments[m];
            REQUIRE(a.entities.size() == b.entities.size());
            for (std::size_t e = 0; e < a.entities.size(); ++e) {
                CHECK(a.entities[e].player == b.entities[e].player);
                CHECK(a.entities[e].pos.x == b.entities[e].pos.x);
                CHECK(a.entities[e].pos.y == b.entities[e].pos.y);
            }
        }
    }
}

TEST_CASE("coordinate normalization is idempotent and anchored") {
    GroundTruth truth = default_truth(6);
    truth.possessions_per_game = 12;
    auto games = generate_season(truth, 1, 17);
    GameBundle b = games[0].bundle;  // already normalized by the generator
    GameBundle twice = b;
    normalize_coordinates(twice);
    REQUIRE(twice.moments.size() == b.moments.size());
    for (std::size_t m = 0; m < b.moments.size(); ++m)
        for (std::size_t e = 0; e < b.moments[m].entities.size(); ++e) {
            CHECK(twice.moments[m].entities[e].pos.x == b.moments[m].entities[e].pos.x);
            CHECK(twice.moments[m].entities[e].pos.y == b.moments[m].entities[e].pos.y);
        }
}

TEST_CASE("locate_player honors the anchor tolerance") {
    std::vector<Moment> moments(2);
    moments[0].wall_time_ms = 1000;
    moments[1].wall_time_ms = 2000;
    MomentEntity e;
    e.kind = EntityKind::Player;
    e.team = "H";
    e.player = "p";
    e.pos = {10, 20};
    moments[0].entities.push_back(e);
    e.pos = {30, 40};
    moments[1].entities.push_back(e);

    const CourtPoint* at = locate_player(moments, "p", 1040);
    REQUIRE(at != nullptr);
    CHECK(at->x == 10);
    CHECK(locate_player(moments, "p", 1081) == nullptr);   // beyond 80 ms
    const CourtPoint* near2 = locate_player(moments, "p", 1960);
    REQUIRE(near2 != nullptr);
    CHECK(near2->x == 30);
    CHECK(locate_player(moments, "ghost", 1000) == nullptr);
}
