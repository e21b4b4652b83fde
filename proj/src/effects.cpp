#include "hoops/effects.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <unordered_map>

#include "hoops/csv.hpp"
#include "hoops/design.hpp"
#include "hoops/errors.hpp"

namespace hoops {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// Fast level -> coefficient lookups built once per report.
class FitIndex {
public:
    explicit FitIndex(const ModelFit& fit) {
        intercept_ = fit.scalar("intercept");
        home_ = fit.scalar("home");
        for (int k = 0; k < 6; ++k) c_[k] = fit.scalar("c" + std::to_string(k + 1));
        load(fit, "team", team_);
        load(fit, "opponent", opponent_);
        load(fit, "sk_generosity", skg_);
        load(fit, "sk_bias", skb_);
        load(fit, "passer", passer_);
        load(fit, "position", position_);
        load(fit, "passer_zone", passer_zone_);
        load(fit, "shooter_zone", shooter_zone_);
        load(fit, "zone_pair", zone_pair_);
    }

    // The row's linear predictor split by effect family.
    struct Terms {
        double home = 0.0, team = 0.0, opponent = 0.0;
        double skg = 0.0, skb = 0.0;
        double passer = 0.0, position = 0.0;
        double context = 0.0;  // intercept + c1..c6 + zones
        double total() const {
            return home + team + opponent + skg + skb + passer + position + context;
        }
    };

    Terms terms(const PotentialAssist& pa) const {
        Terms t;
        if (pa.is_home) {
            t.home = home_;
            t.skb = at(skb_, pa.scorekeeper);
        }
        t.team = at(team_, pa.team);
        t.opponent = at(opponent_, pa.opponent);
        t.skg = at(skg_, pa.scorekeeper);
        t.passer = at(passer_, pa.passer);
        t.position = at(position_, position_code(pa.passer_position));
        t.context = intercept_;
        for (int k = 0; k < 6; ++k) t.context += c_[k] * continuous_value(pa, k);
        t.context += at(passer_zone_, zone_name(pa.c7_passer_zone));
        t.context += at(shooter_zone_, zone_name(pa.c8_shooter_zone));
        t.context += at(zone_pair_, zone_pair_level(pa.c7_passer_zone, pa.c8_shooter_zone));
        return t;
    }

private:
    using Map = std::unordered_map<std::string, double>;

    static void load(const ModelFit& fit, const std::string& name, Map& out) {
        if (const auto* g = fit.find(name))
            for (std::size_t i = 0; i < g->levels.size(); ++i)
                out[g->levels[i]] = g->values[i];
    }
    static double at(const Map& m, const std::string& key) {
        auto it = m.find(key);
        return it == m.end() ? 0.0 : it->second;
    }

    double intercept_ = 0.0, home_ = 0.0;
    double c_[6] = {};
    Map team_, opponent_, skg_, skb_, passer_, position_, passer_zone_,
        shooter_zone_, zone_pair_;
};

// Dense decreasing ranking: equal totals share a rank.
std::vector<int> dense_ranks(const std::vector<double>& totals) {
    std::vector<double> distinct = totals;
    std::sort(distinct.begin(), distinct.end(), std::greater<double>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> ranks(totals.size());
    for (std::size_t i = 0; i < totals.size(); ++i) {
        auto it = std::lower_bound(distinct.begin(), distinct.end(), totals[i],
                                   std::greater<double>());
        ranks[i] = static_cast<int>(it - distinct.begin()) + 1;
    }
    return ranks;
}

}  // namespace

std::vector<PredictedRatio> predicted_ratios(const ModelFit& fit, double league_ratio) {
    const ModelFit::Group* gen = fit.find("sk_generosity");
    if (gen == nullptr)
        throw InvalidInputError("predicted_ratios: fit has no sk_generosity group");
    const double gen_mean = fit.group_mean("sk_generosity");
    const double bias_mean = fit.group_mean("sk_bias");
    std::vector<PredictedRatio> out;
    for (std::size_t i = 0; i < gen->levels.size(); ++i) {
        PredictedRatio r;
        r.scorekeeper = gen->levels[i];
        const double g = gen->values[i] - gen_mean;
        const double b = fit.value("sk_bias", r.scorekeeper) - bias_mean;
        r.away = league_ratio + g;
        r.home = league_ratio + g + b;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.scorekeeper < b.scorekeeper; });
    return out;
}

AveragePotentialAssist average_potential_assist(const std::vector<PotentialAssist>& pas) {
    if (pas.empty())
        throw InvalidInputError("average_potential_assist: empty record set");
    AveragePotentialAssist a;
    double* slots[6] = {&a.c1, &a.c2, &a.c3, &a.c4, &a.c5, &a.c6};
    for (const auto& pa : pas)
        for (int k = 0; k < 6; ++k) *slots[k] += continuous_value(pa, k);
    for (int k = 0; k < 6; ++k) *slots[k] /= static_cast<double>(pas.size());
    return a;
}

double baseline_value(const ModelFit& fit, const AveragePotentialAssist& avg) {
    const double means[6] = {avg.c1, avg.c2, avg.c3, avg.c4, avg.c5, avg.c6};
    double v = fit.scalar("intercept");
    for (int k = 0; k < 6; ++k)
        v += means[k] * fit.scalar("c" + std::to_string(k + 1));
    return v;
}

double probability_delta(double v, double contribution) {
    return sigmoid(v + contribution) - sigmoid(v);
}

double effect_of(const ModelFit& fit, const AveragePotentialAssist& avg,
                 const std::string& group, const std::string& level, double value) {
    double v = baseline_value(fit, avg);
    const double means[6] = {avg.c1, avg.c2, avg.c3, avg.c4, avg.c5, avg.c6};
    for (int k = 0; k < 6; ++k) {
        if (group == "c" + std::to_string(k + 1)) {
            v -= means[k] * fit.scalar(group);  // interest term leaves the baseline
            break;
        }
    }
    return probability_delta(v, value * fit.value(group, level));
}

const std::vector<std::string>& non_contextual_groups() {
    static const std::vector<std::string> groups = {
        "home", "team", "opponent", "sk_generosity", "sk_bias", "passer", "position"};
    return groups;
}

AdjustedAssistReport adjust_assists(const ModelFit& fit,
                                    const std::vector<PotentialAssist>& pas,
                                    AdjustMode mode) {
    FitIndex idx(fit);

    struct Acc {
        long recorded = 0;
        double adjusted = 0.0;
        double contrib[7] = {};  // position, passer, home_sk, away_sk, team, opponent, home
    };
    std::map<PlayerId, Acc> by_player;  // ordered for deterministic reports

    for (const auto& pa : pas) {
        Acc& acc = by_player[pa.passer];
        if (pa.label_recorded_assist) ++acc.recorded;
        FitIndex::Terms t = idx.terms(pa);
        const double eta = t.total();
        const double p_full = sigmoid(eta);
        const double p_ctx = sigmoid(t.context);
        acc.adjusted += mode == AdjustMode::ExpectedAll
                            ? p_ctx
                            : (pa.label_recorded_assist ? 1.0 : 0.0) + (p_ctx - p_full);
        const double home_sk = pa.is_home ? t.skg + t.skb : 0.0;
        const double away_sk = pa.is_home ? 0.0 : t.skg;
        const double terms[7] = {t.position, t.passer, home_sk, away_sk,
                                 t.team,     t.opponent, t.home};
        for (int g = 0; g < 7; ++g)
            acc.contrib[g] += p_full - sigmoid(eta - terms[g]);
    }

    static const char* kContribNames[7] = {
        "position", "passer", "home_scorekeeper", "away_scorekeeper",
        "team",     "opponent", "home"};

    AdjustedAssistReport report;
    std::vector<double> recorded_totals, adjusted_totals;
    for (const auto& [player, acc] : by_player) {
        PlayerAdjustment row;
        row.player = player;
        row.recorded = acc.recorded;
        row.adjusted = acc.adjusted;
        row.change = acc.adjusted - static_cast<double>(acc.recorded);
        for (int g = 0; g < 7; ++g) row.contributions[kContribNames[g]] = acc.contrib[g];
        report.players.push_back(std::move(row));
        recorded_totals.push_back(static_cast<double>(acc.recorded));
        adjusted_totals.push_back(acc.adjusted);
    }
    auto orig = dense_ranks(recorded_totals);
    auto adj = dense_ranks(adjusted_totals);
    for (std::size_t i = 0; i < report.players.size(); ++i) {
        report.players[i].original_rank = orig[i];
        report.players[i].adjusted_rank = adj[i];
    }
    std::sort(report.players.begin(), report.players.end(),
              [](const PlayerAdjustment& a, const PlayerAdjustment& b) {
                  if (a.recorded != b.recorded) return a.recorded > b.recorded;
                  return a.player < b.player;
              });
    return report;
}

std::vector<BonusDistribution> scorekeeper_bonus(const ModelFit& fit,
                                                 const std::vector<PotentialAssist>& pas) {
    FitIndex idx(fit);

    struct GameAcc {
        TeamId scorekeeper;
        bool home = false;
        long recorded = 0;
        double expected = 0.0;
    };
    // key: (game, team) -> one sample per team-game
    std::map<std::pair<GameId, TeamId>, GameAcc> games;
    for (const auto& pa : pas) {
        GameAcc& g = games[{pa.game_id, pa.team}];
        g.scorekeeper = pa.scorekeeper;
        g.home = pa.is_home;
        if (pa.label_recorded_assist) ++g.recorded;
        FitIndex::Terms t = idx.terms(pa);
        g.expected += sigmoid(t.total() - t.skg - t.skb);
    }

    std::map<std::pair<TeamId, bool>, std::vector<BonusSample>> grouped;
    for (const auto& [key, g] : games) {
        BonusSample s;
        s.game_id = key.first;
        s.value = static_cast<double>(g.recorded) - g.expected;
        grouped[{g.scorekeeper, !g.home}].push_back(std::move(s));  // false sorts first: home
    }

    std::vector<BonusDistribution> out;
    for (auto& [key, samples] : grouped) {
        BonusDistribution d;
        d.scorekeeper = key.first;
        d.home_side = !key.second;
        d.samples = std::move(samples);
        const double n = static_cast<double>(d.samples.size());
        for (const auto& s : d.samples) {
            d.mean += s.value;
            d.mae += std::abs(s.value);
        }
        d.mean /= n;
        d.mae /= n;
        if (d.samples.size() > 1) {
            for (const auto& s : d.samples)
                d.variance += (s.value - d.mean) * (s.value - d.mean);
            d.variance /= n - 1.0;
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<StabilityEntry> coefficient_stability(const std::vector<ModelFit>& fits) {
    static const char* kGroups[] = {"team",     "opponent",    "sk_bias",
                                    "sk_generosity", "position", "passer_zone",
                                    "shooter_zone",  "zone_pair", "passer"};
    std::vector<StabilityEntry> out;
    for (std::size_t a = 0; a < fits.size(); ++a) {
        for (std::size_t b = a + 1; b < fits.size(); ++b) {
            for (const char* name : kGroups) {
                const auto* ga = fits[a].find(name);
                const auto* gb = fits[b].find(name);
                if (ga == nullptr || gb == nullptr) continue;
                std::vector<double> xs, ys;
                for (std::size_t i = 0; i < ga->levels.size(); ++i) {
                    for (std::size_t j = 0; j < gb->levels.size(); ++j) {
                        if (ga->levels[i] == gb->levels[j]) {
                            xs.push_back(ga->values[i]);
                            ys.push_back(gb->values[j]);
                            break;
                        }
                    }
                }
                if (xs.size() < 2) continue;
                const double n = static_cast<double>(xs.size());
                double mx = 0.0, my = 0.0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    mx += xs[i];
                    my += ys[i];
                }
                mx /= n;
                my /= n;
                double sxy = 0.0, sxx = 0.0, syy = 0.0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    sxy += (xs[i] - mx) * (ys[i] - my);
                    sxx += (xs[i] - mx) * (xs[i] - mx);
                    syy += (ys[i] - my) * (ys[i] - my);
                }
                StabilityEntry e;
                e.group = name;
                e.season_a = static_cast<int>(a);
                e.season_b = static_cast<int>(b);
                e.shared_levels = static_cast<int>(xs.size());
                e.correlation = sxx > 0.0 && syy > 0.0
                                    ? sxy / std::sqrt(sxx * syy)
                                    : 0.0;
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

void write_adjusted_assists(const std::string& path, const AdjustedAssistReport& report) {
    csv::Writer w(path);
    w.write_row({"player", "recorded", "adjusted", "change", "original_rank",
                 "adjusted_rank", "position", "passer", "home_scorekeeper",
                 "away_scorekeeper", "team", "opponent", "home"});
    for (const auto& p : report.players) {
        std::vector<std::string> row = {
            p.player,
            std::to_string(p.recorded),
            csv::format_double(p.adjusted),
            csv::format_double(p.change),
            std::to_string(p.original_rank),
            std::to_string(p.adjusted_rank),
        };
        for (const char* name : {"position", "passer", "home_scorekeeper",
                                 "away_scorekeeper", "team", "opponent", "home"})
            row.push_back(csv::format_double(p.contributions.at(name)));
        w.write_row(row);
    }
    w.close();
}

void write_bonus_samples(const std::string& path,
                         const std::vector<BonusDistribution>& dists) {
    csv::Writer w(path);
    w.write_row({"scorekeeper", "side", "game_id", "sample"});
    for (const auto& d : dists)
        for (const auto& s : d.samples)
            w.write_row({d.scorekeeper, d.home_side ? "home" : "away", s.game_id,
                         csv::format_double(s.value)});
    w.close();
}

void write_bonus_summary(const std::string& path,
                         const std::vector<BonusDistribution>& dists) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& d : dists) {
        j.push_back({{"scorekeeper", d.scorekeeper},
                     {"side", d.home_side ? "home" : "away"},
                     {"games", d.samples.size()},
                     {"mean", d.mean},
                     {"variance", d.variance},
                     {"mae", d.mae}});
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

void write_stability(const std::string& path, const std::vector<StabilityEntry>& entries) {
    csv::Writer w(path);
    w.write_row({"group", "season_a", "season_b", "shared_levels", "correlation"});
    for (const auto& e : entries)
        w.write_row({e.group, std::to_string(e.season_a), std::to_string(e.season_b),
                     std::to_string(e.shared_levels), csv::format_double(e.correlation)});
    w.close();
}

}  // namespace hoops
