// Pipeline driver: ingest -> extract -> fit -> reports, plus the synthetic
// season generator and its recovery check.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "hoops/design.hpp"
#include "hoops/effects.hpp"
#include "hoops/errors.hpp"
#include "hoops/features.hpp"
#include "hoops/ingest.hpp"
#include "hoops/linear.hpp"
#include "hoops/logistic.hpp"
#include "hoops/synth.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;
constexpr int kExitNoConverge = 70;

struct Defaults {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    int folds = 100;
    std::uint64_t seed = 1;
    std::string lambda_grid = "1e-6..1e2:25";
    double lambda = 1e-4;  // used when no grid search is requested
    int games = 100;
    int validate_folds = 10;
};

nlohmann::json defaults_json(const Defaults& d) {
    return {{"threads", d.threads},
            {"folds", d.folds},
            {"seed", d.seed},
            {"lambda_grid", d.lambda_grid},
            {"lambda", d.lambda},
            {"games", d.games},
            {"validate_folds", d.validate_folds}};
}

// flags > config file > built-in defaults
void apply_config(const std::string& path, Defaults& d) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw hoops::ParseError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw hoops::ParseError(std::string("bad config JSON: ") + e.what());
    }
    if (j.contains("threads")) d.threads = j["threads"].get<int>();
    if (j.contains("folds")) d.folds = j["folds"].get<int>();
    if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lambda_grid")) d.lambda_grid = j["lambda_grid"].get<std::string>();
    if (j.contains("lambda")) d.lambda = j["lambda"].get<double>();
    if (j.contains("games")) d.games = j["games"].get<int>();
    if (j.contains("validate_folds")) d.validate_folds = j["validate_folds"].get<int>();
}

// "1e-6..1e2:25" -> 25 log-spaced values
std::vector<double> parse_lambda_grid(const std::string& s) {
    auto dots = s.find("..");
    auto colon = s.rfind(':');
    if (dots == std::string::npos || colon == std::string::npos || colon < dots)
        throw hoops::InvalidInputError("bad lambda grid '" + s + "', want lo..hi:count");
    try {
        double lo = std::stod(s.substr(0, dots));
        double hi = std::stod(s.substr(dots + 2, colon - dots - 2));
        int count = std::stoi(s.substr(colon + 1));
        return hoops::make_lambda_grid(lo, hi, count);
    } catch (const std::logic_error&) {
        throw hoops::InvalidInputError("bad lambda grid '" + s + "', want lo..hi:count");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"scorekeeper-bias analysis pipeline"};
    app.require_subcommand(1);

    Defaults def;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags take precedence)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate raw files and write bundles");
    std::string in_dir, in_out;
    ingest->add_option("--data-dir", in_dir, "directory with moments/events/box/roster csv")
        ->required();
    ingest->add_option("--out", in_out, "output bundle directory")->required();

    // extract
    auto* extract = app.add_subcommand("extract", "extract potential assists");
    std::string ex_dir, ex_out;
    extract->add_option("--bundle-dir", ex_dir, "bundle directory (with assists.csv)")
        ->required();
    extract->add_option("--out", ex_out, "potential_assists.csv path")->required();

    // fit-team
    auto* fit_team = app.add_subcommand("fit-team", "team-level ratio model");
    std::string ft_box, ft_ratio = "ar", ft_out;
    fit_team->add_option("--box", ft_box, "box.csv path")->required();
    fit_team->add_option("--ratio", ft_ratio, "ar|br")
        ->check(CLI::IsMember({"ar", "br"}));
    fit_team->add_option("--out", ft_out, "fit JSON path")->required();

    // fit-contextual
    auto* fit_ctx = app.add_subcommand("fit-contextual", "penalized logistic model");
    std::string fc_pa, fc_out, fc_grid;
    int fc_folds = -1, fc_threads = -1;
    std::uint64_t fc_seed = 0;
    double fc_lambda = -1.0;
    fit_ctx->add_option("--pa", fc_pa, "potential_assists.csv path")->required();
    fit_ctx->add_option("--lambda-grid", fc_grid, "lo..hi:count for CV selection");
    fit_ctx->add_option("--lambda", fc_lambda, "fixed penalty (skips CV)");
    fit_ctx->add_option("--folds", fc_folds, "CV folds");
    auto* fc_seed_opt = fit_ctx->add_option("--seed", fc_seed, "fold-split seed");
    fit_ctx->add_option("--threads", fc_threads, "worker threads");
    fit_ctx->add_option("--out", fc_out, "fit JSON path")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "k-fold metrics for a model spec");
    std::string va_pa, va_spec = "full", va_out;
    int va_folds = -1, va_threads = -1;
    std::uint64_t va_seed = 0;
    double va_lambda = -1.0;
    validate->add_option("--pa", va_pa, "potential_assists.csv path")->required();
    validate->add_option("--spec", va_spec, "full|no-scorekeeper|no-context|intercept")
        ->check(CLI::IsMember({"full", "no-scorekeeper", "no-context", "intercept"}));
    validate->add_option("--folds", va_folds, "CV folds");
    auto* va_seed_opt = validate->add_option("--seed", va_seed, "fold-split seed");
    validate->add_option("--lambda", va_lambda, "penalty");
    validate->add_option("--threads", va_threads, "worker threads");
    validate->add_option("--out", va_out, "optional metrics JSON path");

    // adjust
    auto* adjust = app.add_subcommand("adjust", "adjusted assist totals");
    std::string ad_fit, ad_pa, ad_out, ad_mode = "expected";
    adjust->add_option("--fit", ad_fit, "contextual fit JSON")->required();
    adjust->add_option("--pa", ad_pa, "potential_assists.csv path")->required();
    adjust->add_option("--mode", ad_mode, "expected|delta")
        ->check(CLI::IsMember({"expected", "delta"}));
    adjust->add_option("--out", ad_out, "adjusted_assists.csv path")->required();

    // bonus
    auto* bonus = app.add_subcommand("bonus", "scorekeeper bonus distributions");
    std::string bo_fit, bo_pa, bo_out, bo_summary;
    bonus->add_option("--fit", bo_fit, "contextual fit JSON")->required();
    bonus->add_option("--pa", bo_pa, "potential_assists.csv path")->required();
    bonus->add_option("--out", bo_out, "bonus_samples.csv path")->required();
    bonus->add_option("--summary", bo_summary, "optional summary JSON path");

    // stability
    auto* stability = app.add_subcommand("stability", "cross-fit coefficient correlations");
    std::vector<std::string> st_fits;
    std::string st_out;
    stability->add_option("--fits", st_fits, "two or more fit JSON files")
        ->required()
        ->expected(2, -1);
    stability->add_option("--out", st_out, "stability.csv path")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic season");
    std::string sy_truth, sy_out;
    int sy_games = -1;
    std::uint64_t sy_seed = 0;
    bool sy_make = false;
    auto* sy_seed_opt = synth->add_option("--seed", sy_seed, "generation seed");
    synth->add_option("--truth", sy_truth, "ground truth JSON path")->required();
    synth->add_option("--games", sy_games, "number of games");
    synth->add_flag("--make-truth", sy_make,
                    "write a fresh randomized truth to --truth before generating");
    synth->add_option("--out", sy_out, "output data directory")->required();

    // recover
    auto* recover = app.add_subcommand("recover", "compare a fit to planted truth");
    std::string re_truth, re_fit, re_out;
    recover->add_option("--truth", re_truth, "ground truth JSON path")->required();
    recover->add_option("--fit", re_fit, "contextual fit JSON")->required();
    recover->add_option("--out", re_out, "optional recovery CSV path");

    auto* print_config = app.add_subcommand("print-config", "print built-in defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : kExitUsage;
    }
    apply_config(config_path, def);

    if (print_config->parsed()) {
        std::cout << defaults_json(def).dump(2) << "\n";
        return 0;
    }

    if (ingest->parsed()) {
        std::filesystem::create_directories(in_out);
        hoops::Roster roster = hoops::load_roster(in_dir + "/roster.csv");
        hoops::GameStreamLoader loader(in_dir + "/moments.csv", in_dir + "/events.csv",
                                       in_dir + "/box.csv", roster);
        hoops::GameWriter writer(in_out);
        int n = 0;
        while (auto bundle = loader.next()) {
            writer.add(*bundle);
            ++n;
        }
        writer.close();
        hoops::write_roster(in_out + "/roster.csv", roster);
        std::cerr << "ingest: validated " << n << " games\n";
        return 0;
    }

    if (extract->parsed()) {
        hoops::Roster roster = hoops::load_roster(ex_dir + "/roster.csv");
        auto labels = hoops::load_labels(ex_dir + "/assists.csv");
        hoops::GameStreamLoader loader(ex_dir + "/moments.csv", ex_dir + "/events.csv",
                                       ex_dir + "/box.csv", roster);
        std::vector<hoops::PotentialAssist> all;
        long skipped = 0;
        while (auto bundle = loader.next()) {
            auto res = hoops::extract_potential_assists(*bundle, roster, labels);
            for (const auto& d : res.diagnostics) std::cerr << "extract: skipped " << d << "\n";
            skipped += static_cast<long>(res.diagnostics.size());
            all.insert(all.end(), res.records.begin(), res.records.end());
        }
        hoops::write_potential_assists(ex_out, all);
        std::cerr << "extract: " << all.size() << " potential assists, " << skipped
                  << " skipped candidates\n";
        return 0;
    }

    if (fit_team->parsed()) {
        auto box = hoops::load_box_lines(ft_box);
        std::vector<std::string> warnings;
        auto obs = hoops::ratios_from_box(
            box, ft_ratio == "ar" ? hoops::RatioKind::AR : hoops::RatioKind::BR,
            &warnings);
        for (const auto& w : warnings) std::cerr << "fit-team: " << w << "\n";
        auto [design, y] = hoops::build_team_design(obs);
        hoops::ModelFit fit = hoops::fit_team_model(design, y);
        fit.save(ft_out);
        std::cerr << "fit-team: " << fit.n_obs << " observations, R^2 = " << fit.r_squared
                  << "\n";
        return 0;
    }

    if (fit_ctx->parsed()) {
        int folds = fc_folds > 0 ? fc_folds : def.folds;
        int threads = fc_threads > 0 ? fc_threads : def.threads;
        std::uint64_t seed = fc_seed_opt->count() ? fc_seed : def.seed;
        auto pas = hoops::load_potential_assists(fc_pa);
        auto [design, y] = hoops::build_contextual_design(pas, hoops::ModelSpec::Full);
        double lambda;
        if (fc_lambda >= 0.0) {
            lambda = fc_lambda;
        } else {
            auto grid = parse_lambda_grid(fc_grid.empty() ? def.lambda_grid : fc_grid);
            lambda = hoops::select_lambda(design, y, grid, folds, seed, threads);
            std::cerr << "fit-contextual: selected lambda = " << lambda << "\n";
        }
        hoops::ModelFit fit = hoops::fit_contextual_model(design, y, lambda);
        fit.save(fc_out);
        std::cerr << "fit-contextual: " << fit.n_obs
                  << " rows, in-sample mean log-likelihood = " << fit.mean_log_likelihood
                  << "\n";
        return 0;
    }

    if (validate->parsed()) {
        int folds = va_folds > 0 ? va_folds : def.validate_folds;
        int threads = va_threads > 0 ? va_threads : def.threads;
        std::uint64_t seed = va_seed_opt->count() ? va_seed : def.seed;
        double lambda = va_lambda >= 0.0 ? va_lambda : def.lambda;
        auto pas = hoops::load_potential_assists(va_pa);
        auto metrics = hoops::cross_validate(pas, hoops::parse_model_spec(va_spec), folds,
                                             seed, lambda, threads);
        nlohmann::json j = {{"spec", va_spec},
                            {"folds", folds},
                            {"lambda", lambda},
                            {"mean_log_likelihood", metrics.mean_log_likelihood},
                            {"misclassification", metrics.misclassification}};
        std::cout << j.dump(2) << "\n";
        if (!va_out.empty()) {
            std::ofstream out(va_out, std::ios::trunc);
            if (!out) throw hoops::ParseError("cannot open file for writing: " + va_out);
            out << j.dump(2) << "\n";
        }
        return 0;
    }

    if (adjust->parsed()) {
        auto fit = hoops::ModelFit::load(ad_fit);
        auto pas = hoops::load_potential_assists(ad_pa);
        auto report = hoops::adjust_assists(fit, pas,
                                            ad_mode == "expected"
                                                ? hoops::AdjustMode::ExpectedAll
                                                : hoops::AdjustMode::RecordedPlusDelta);
        hoops::write_adjusted_assists(ad_out, report);
        std::cerr << "adjust: " << report.players.size() << " players\n";
        return 0;
    }

    if (bonus->parsed()) {
        auto fit = hoops::ModelFit::load(bo_fit);
        auto pas = hoops::load_potential_assists(bo_pa);
        auto dists = hoops::scorekeeper_bonus(fit, pas);
        hoops::write_bonus_samples(bo_out, dists);
        if (!bo_summary.empty()) hoops::write_bonus_summary(bo_summary, dists);
        std::cerr << "bonus: " << dists.size() << " scorekeeper-side distributions\n";
        return 0;
    }

    if (stability->parsed()) {
        std::vector<hoops::ModelFit> fits;
        for (const auto& p : st_fits) fits.push_back(hoops::ModelFit::load(p));
        auto entries = hoops::coefficient_stability(fits);
        hoops::write_stability(st_out, entries);
        std::cerr << "stability: " << entries.size() << " group pairs\n";
        return 0;
    }

    if (synth->parsed()) {
        std::uint64_t seed = sy_seed_opt->count() ? sy_seed : def.seed;
        int games = sy_games > 0 ? sy_games : def.games;
        std::filesystem::create_directories(sy_out);
        hoops::GroundTruth truth;
        if (sy_make) {
            truth = hoops::default_truth(seed);
            truth.save(sy_truth);
        } else {
            truth = hoops::GroundTruth::load(sy_truth);
        }
        hoops::write_season(sy_out, truth, games, seed);
        std::cerr << "synth: wrote " << games << " games to " << sy_out << "\n";
        return 0;
    }

    if (recover->parsed()) {
        auto truth = hoops::GroundTruth::load(re_truth);
        auto fit = hoops::ModelFit::load(re_fit);
        auto rows = hoops::recovery_report(truth, fit);
        for (const auto& r : rows) {
            std::printf("%-14s levels=%-4d correlation=%8.4f rmse=%.6f\n",
                        r.group.c_str(), r.levels, r.correlation, r.rmse);
        }
        if (!re_out.empty()) hoops::write_recovery(re_out, rows);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hoops::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const hoops::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const hoops::DataQualityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const hoops::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    } catch (const hoops::InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
