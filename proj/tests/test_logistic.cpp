#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hoops/errors.hpp"
#include "hoops/logistic.hpp"

using namespace hoops;

namespace {

struct Problem {
    SparseRowMatrix X;
    Eigen::VectorXd y;
    std::vector<double> mask;
};

// Intercept column plus (p-1) standard normal covariates, Bernoulli labels
// from a fixed true coefficient vector.
Problem make_problem(int n, int p, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd truth(p);
    truth[0] = 0.3;
    for (int j = 1; j < p; ++j) truth[j] = (j % 2 ? 0.8 : -0.5) / std::sqrt(double(j));

    Eigen::MatrixXd dense(n, p);
    for (int i = 0; i < n; ++i) {
        dense(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) dense(i, j) = nd(rng);
    }
    Problem prob;
    prob.X = dense.sparseView();
    prob.y.resize(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        double eta = dense.row(i).dot(truth);
        prob.y[i] = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
    }
    prob.mask.assign(p, 1.0);
    prob.mask[0] = 0.0;
    return prob;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

PotentialAssist bare_pa(const std::string& team, const std::string& opp, bool home,
                        bool label) {
    PotentialAssist pa;
    pa.game_id = "g";
    pa.team = team;
    pa.opponent = opp;
    pa.is_home = home;
    pa.scorekeeper = home ? team : opp;
    pa.passer = team + "_p";
    pa.shooter = team + "_s";
    pa.passer_position = Position::PointGuard;
    pa.c1_possession_time = 1.5;
    pa.c2_dribbles = 1;
    pa.c3_travel_distance = 4.0;
    pa.c4_pass_distance = 12.0;
    pa.c5_passer_defender_dist = 4.0;
    pa.c6_shooter_defender_dist = 6.0;
    pa.c7_passer_zone = CourtZone::Paint;
    pa.c8_shooter_zone = CourtZone::Long2;
    pa.label_recorded_assist = label;
    return pa;
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    auto prob = make_problem(120, 6, 11);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 0.5);
    Eigen::VectorXd beta(6);
    for (int j = 0; j < 6; ++j) beta[j] = nd(rng);

    const double lambda = 0.07;
    Eigen::VectorXd g = penalized_gradient(prob.X, prob.y, lambda, prob.mask, beta);
    const double h = 1e-6;
    for (int j = 0; j < 6; ++j) {
        Eigen::VectorXd bp = beta, bm = beta;
        bp[j] += h;
        bm[j] -= h;
        double fd = (penalized_objective(prob.X, prob.y, lambda, prob.mask, bp) -
                     penalized_objective(prob.X, prob.y, lambda, prob.mask, bm)) /
                    (2 * h);
        double denom = std::max(1.0, std::abs(fd));
        CHECK(std::abs(g[j] - fd) / denom < 1e-6);
    }
}

TEST_CASE("accepted iterates never increase the objective") {
    auto prob = make_problem(400, 8, 5);
    auto res = fit_logistic(prob.X, prob.y, 1e-3, prob.mask);
    REQUIRE(res.objective_history.size() >= 2);
    for (size_t i = 1; i < res.objective_history.size(); ++i)
        CHECK(res.objective_history[i] <= res.objective_history[i - 1] + 1e-14);
    CHECK(res.objective == doctest::Approx(res.objective_history.back()));
}

TEST_CASE("heavy penalty shrinks slopes to zero and intercept to the base rate") {
    auto prob = make_problem(500, 5, 9);
    auto res = fit_logistic(prob.X, prob.y, 1e6, prob.mask);
    for (int j = 1; j < 5; ++j) CHECK(std::abs(res.beta[j]) < 1e-5);
    double pbar = prob.y.mean();
    CHECK(res.beta[0] == doctest::Approx(logit(pbar)).epsilon(1e-4));
}

TEST_CASE("newton solution agrees with an independent gradient-descent oracle") {
    auto prob = make_problem(200, 4, 17);
    const double lambda = 0.05;
    auto res = fit_logistic(prob.X, prob.y, lambda, prob.mask);

    // Plain backtracking gradient descent written against the public
    // objective/gradient, no shared solver code.
    Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
    double f = penalized_objective(prob.X, prob.y, lambda, prob.mask, b);
    for (int it = 0; it < 200000; ++it) {
        Eigen::VectorXd g = penalized_gradient(prob.X, prob.y, lambda, prob.mask, b);
        if (g.lpNorm<Eigen::Infinity>() < 1e-11) break;
        double step = 4.0;
        while (true) {
            Eigen::VectorXd cand = b - step * g;
            double fc = penalized_objective(prob.X, prob.y, lambda, prob.mask, cand);
            if (fc <= f - 1e-4 * step * g.squaredNorm()) {
                b = cand;
                f = fc;
                break;
            }
            step *= 0.5;
            REQUIRE(step > 1e-20);
        }
    }
    CHECK((res.beta - b).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(res.objective == doctest::Approx(f).epsilon(1e-10));
}

TEST_CASE("unpenalized intercept calibrates predicted to observed positives") {
    auto prob = make_problem(600, 6, 23);
    auto res = fit_logistic(prob.X, prob.y, 1e-4, prob.mask);
    double sum_p = 0.0;
    Eigen::VectorXd eta = prob.X * res.beta;
    for (int i = 0; i < eta.size(); ++i) sum_p += 1.0 / (1.0 + std::exp(-eta[i]));
    CHECK(sum_p == doctest::Approx(prob.y.sum()).epsilon(1e-6));
}

TEST_CASE("exhausting the iteration budget raises a convergence error") {
    auto prob = make_problem(400, 8, 5);
    LogisticOptions opts;
    opts.max_iter = 1;
    CHECK_THROWS_AS(fit_logistic(prob.X, prob.y, 1e-3, prob.mask, nullptr, opts),
                    ConvergenceError);
}

TEST_CASE("lambda grid is log-spaced with exact endpoints") {
    auto grid = make_lambda_grid(1e-4, 1e2, 7);
    REQUIRE(grid.size() == 7);
    CHECK(grid.front() == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(grid.back() == doctest::Approx(1e2).epsilon(1e-14));
    for (size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
        CHECK(std::log10(grid[i]) - std::log10(grid[i - 1]) == doctest::Approx(1.0));
    }
    CHECK(make_lambda_grid(0.5, 0.5, 1) == std::vector<double>{0.5});
    CHECK_THROWS_AS(make_lambda_grid(0.0, 1.0, 3), InvalidInputError);
    CHECK_THROWS_AS(make_lambda_grid(1.0, 0.5, 3), InvalidInputError);
    CHECK_THROWS_AS(make_lambda_grid(1e-3, 1.0, 0), InvalidInputError);
}

TEST_CASE("fold assignment is a balanced deterministic partition") {
    auto f1 = fold_assignment(103, 10, 42);
    auto f2 = fold_assignment(103, 10, 42);
    CHECK(f1 == f2);
    auto f3 = fold_assignment(103, 10, 43);
    CHECK(f1 != f3);

    std::vector<int> counts(10, 0);
    for (int f : f1) {
        REQUIRE(f >= 0);
        REQUIRE(f < 10);
        ++counts[f];
    }
    int lo = counts[0], hi = counts[0];
    for (int c : counts) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi - lo <= 1);

    CHECK_THROWS_AS(fold_assignment(10, 1, 0), InvalidInputError);
    CHECK_THROWS_AS(fold_assignment(10, 11, 0), InvalidInputError);
}

TEST_CASE("lambda selection is deterministic and thread-count invariant") {
    std::vector<PotentialAssist> pas;
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        bool home = i % 2 == 0;
        auto pa = bare_pa(home ? "T1" : "T2", home ? "T2" : "T1", home, false);
        pa.game_id = "g" + std::to_string(i / 10);
        pa.c1_possession_time = 1.0 + 5.0 * u(rng);
        pa.c2_dribbles = i % 5;
        pa.c3_travel_distance = 2.0 + 10.0 * u(rng);
        pa.c4_pass_distance = 6.0 + 20.0 * u(rng);
        pa.c5_passer_defender_dist = 1.0 + 8.0 * u(rng);
        pa.c6_shooter_defender_dist = 1.0 + 12.0 * u(rng);
        double eta = 0.4 - 0.25 * (pa.c1_possession_time - 3.5) + 0.3 * nd(rng);
        pa.label_recorded_assist = u(rng) < 1.0 / (1.0 + std::exp(-eta));
        pas.push_back(pa);
    }
    auto [design, y] = build_contextual_design(pas, ModelSpec::Full);
    auto grid = make_lambda_grid(1e-4, 1e1, 6);

    double l1 = select_lambda(design, y, grid, 5, 99, 1);
    double l2 = select_lambda(design, y, grid, 5, 99, 4);
    double l3 = select_lambda(design, y, grid, 5, 99, 1);
    CHECK(l1 == l2);
    CHECK(l1 == l3);
    bool in_grid = false;
    for (double g : grid) in_grid = in_grid || g == l1;
    CHECK(in_grid);

    std::vector<double> bad = {1.0, 0.5};
    CHECK_THROWS_AS(select_lambda(design, y, bad, 5, 99), InvalidInputError);
    CHECK_THROWS_AS(select_lambda(design, y, {}, 5, 99), InvalidInputError);
}

TEST_CASE("intercept-only cross validation matches the base-rate entropy") {
    std::vector<PotentialAssist> pas;
    const int n = 2000;
    const int positives = 1240;  // rate 0.62
    for (int i = 0; i < n; ++i) {
        bool home = i % 2 == 0;
        auto pa = bare_pa(home ? "T1" : "T2", home ? "T2" : "T1", home, i < positives);
        pa.game_id = "g" + std::to_string(i / 40);
        pas.push_back(pa);
    }
    auto metrics = cross_validate(pas, ModelSpec::InterceptOnly, 10, 7, 1e-4, 2);
    double p = double(positives) / n;
    double entropy = -(p * std::log(p) + (1 - p) * std::log(1 - p));
    CHECK(metrics.mean_log_likelihood == doctest::Approx(-entropy).epsilon(0.01));
    CHECK(metrics.misclassification == doctest::Approx(1.0 - p).epsilon(0.02));

    auto again = cross_validate(pas, ModelSpec::InterceptOnly, 10, 7, 1e-4, 1);
    CHECK(metrics.mean_log_likelihood == again.mean_log_likelihood);
    CHECK(metrics.misclassification == again.misclassification);
}

TEST_CASE("contextual fit reports coefficients on the original scale") {
    // Single informative covariate with a known generative slope; the
    // original-scale c1 coefficient must undo the standardization.
    std::vector<PotentialAssist> pas;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double b0 = 0.2, b1 = -0.35;
    for (int i = 0; i < 4000; ++i) {
        bool home = i % 2 == 0;
        auto pa = bare_pa(home ? "T1" : "T2", home ? "T2" : "T1", home, false);
        pa.game_id = "g" + std::to_string(i / 50);
        pa.c1_possession_time = 1.0 + 6.0 * u(rng);
        double eta = b0 + b1 * (pa.c1_possession_time - 4.0);
        pa.label_recorded_assist = u(rng) < 1.0 / (1.0 + std::exp(-eta));
        pas.push_back(pa);
    }
    auto [design, y] = build_contextual_design(pas, ModelSpec::Full);
    ModelFit fit = fit_contextual_model(design, y, 1e-4);
    CHECK(fit.fit_kind == "logistic");
    CHECK(fit.lambda == 1e-4);
    CHECK(fit.n_obs == 4000);
    CHECK(fit.scalar("c1") == doctest::Approx(b1).epsilon(0.25));
    CHECK(fit.mean_log_likelihood < 0.0);

    // Reconstruction check: original-scale linear predictor equals the
    // standardized-scale one for every row.
    auto res = fit_logistic(SparseRowMatrix(design.matrix), y, 1e-4,
                            design.penalty_mask);
    Eigen::VectorXd eta_std = design.matrix * res.beta;
    for (int i = 0; i < 20; ++i) {
        const auto& pa = pas[i];
        double eta = fit.scalar("intercept") +
                     (pa.is_home ? fit.scalar("home") : 0.0) +
                     fit.value("team", pa.team) + fit.value("opponent", pa.opponent) +
                     fit.value("sk_generosity", pa.scorekeeper) +
                     (pa.is_home ? fit.value("sk_bias", pa.scorekeeper) : 0.0) +
                     fit.value("passer", pa.passer) +
                     fit.value("position", position_code(pa.passer_position)) +
                     fit.scalar("c1") * pa.c1_possession_time +
                     fit.scalar("c2") * pa.c2_dribbles +
                     fit.scalar("c3") * pa.c3_travel_distance +
                     fit.scalar("c4") * pa.c4_pass_distance +
                     fit.scalar("c5") * pa.c5_passer_defender_dist +
                     fit.scalar("c6") * pa.c6_shooter_defender_dist +
                     fit.value("passer_zone", zone_name(pa.c7_passer_zone)) +
                     fit.value("shooter_zone", zone_name(pa.c8_shooter_zone)) +
                     fit.value("zone_pair",
                               zone_pair_level(pa.c7_passer_zone, pa.c8_shooter_zone));
        CHECK(eta == doctest::Approx(eta_std[i]).epsilon(1e-9));
    }
}
