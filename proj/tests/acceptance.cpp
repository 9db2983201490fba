// Acceptance suite: one line per criterion, exit code = number of failed
// checks. Each check pins its tolerance in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cvplan/cv_variance.hpp"
#include "cvplan/index_sets.hpp"
#include "cvplan/logistic.hpp"
#include "cvplan/montecarlo.hpp"
#include "cvplan/normal.hpp"
#include "cvplan/regression.hpp"
#include "cvplan/rng.hpp"
#include "cvplan/split_optimizer.hpp"
#include "support/quadrature.hpp"

using namespace cvplan;

namespace {

struct Check {
    std::string id;
    std::string label;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

bool check_table1(std::string& note) {
    const double rhos[6] = {.2, .3, .4, .5, .6, .7};
    const double pis[4] = {.8, .85, .9, .95};
    const double rs[4] = {.1, .05, .025, .01};
    const int table_re[6][4] = {{16, 23, 36, 76}, {10, 14, 21, 45}, {6, 9, 14, 29},
                                {4, 6, 9, 19},    {3, 4, 6, 13},    {2, 3, 4, 9}};
    const int table_rr[6][4] = {{6, 8, 12, 19}, {5, 7, 10, 15}, {4, 6, 8, 13},
                                {4, 5, 7, 11},  {3, 4, 6, 9},   {3, 4, 5, 7}};
    int bad = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 4; ++j) {
            if (j_for_effectiveness(rhos[i], pis[j]).J != table_re[i][j]) ++bad;
            if (j_for_reduction(rhos[i], rs[j]).J != table_rr[i][j]) ++bad;
        }
    note = "48 entries, " + std::to_string(bad) + " mismatches";
    return bad == 0;
}

bool check_table2(std::string& note) {
    MomentParams p;
    p.beta = 2.0;
    p.gamma = 4.0;
    p.sigma2 = 1.0;
    const struct {
        int n, k;
        double value;
    } rows[12] = {{24, 2, 1.073},  {30, 2, 1.060},  {30, 3, 1.029},  {40, 2, 1.046},
                  {40, 4, 1.015},  {50, 2, 1.038},  {50, 5, 1.009},  {100, 5, 1.005},
                  {100, 10, 1.002}, {150, 5, 1.003}, {150, 10, 1.001}, {150, 15, 1.001}};
    int bad = 0;
    double worst = 0.0;
    for (const auto& row : rows) {
        const double re = relative_efficiency_kfold(row.n, row.k, p);
        worst = std::max(worst, std::abs(re - row.value));
        if (std::abs(re - row.value) > 0.001) ++bad;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "12 entries, worst gap %.5f", worst);
    note = buf;
    return bad == 0;
}

bool check_lemma_oracle(std::string& note) {
    int checked = 0, bad = 0;
    for (int n = 4; n <= 8; ++n)
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1) {
            const SplitGeometry geom(n, n1);
            for (MomentTag tag : all_moment_tags()) {
                ++checked;
                if (lemma_moment(tag, geom) != enumerate_moment(tag, geom)) ++bad;
            }
        }
    note = std::to_string(checked) + " (tag, geometry) pairs, " +
           std::to_string(bad) + " mismatches";
    return bad == 0;
}

bool check_optimal_n1(std::string& note) {
    CounterRng rng(777);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const double a = 1e-3 + 10.0 * rng.uniform01();
        const double b = 1e-3 + 10.0 * rng.uniform01();
        const int n = 10 + static_cast<int>(rng.below(1991));
        MomentParams p;
        p.alpha = a;
        p.beta = b;
        p.sigma2 = 1.0;
        const int got = optimal_n1(n, p).n1_opt;
        int best = (n + 1) / 2;
        double best_v = a / best + b / (n - best);
        for (int u = best + 1; u <= n - 1; ++u) {
            const double v = a / u + b / (n - u);
            if (v < best_v) {
                best_v = v;
                best = u;
            }
        }
        if (got != best) ++bad;
    }
    note = "1000 random (A,B,n), " + std::to_string(bad) + " mismatches";
    return bad == 0;
}

bool check_mean_rule_normal(std::string& note) {
    const MeanCell cell = simulate_mean_cell(DistSpec::normal(0, 1),
                                             LossSpec::squared(), 750, 500, 20240101);
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "n1/n = %.4f (want .5 exactly), rho = %.4f (want .4987 +/- .01),"
                  " k/n = %.3f (want 1)",
                  cell.n1_ratio_hat, cell.rho_opt_hat, cell.k_ratio_hat);
    note = buf;
    return cell.n1_ratio_hat == 0.5 && std::abs(cell.rho_opt_hat - 0.4987) <= 0.01 &&
           cell.k_ratio_hat == 1.0;
}

bool check_mean_rule_modsq(std::string& note) {
    const MeanCell expcell = simulate_mean_cell(
        DistSpec::exponential(1), LossSpec::modified_squared(), 750, 500, 20240102);
    const MeanCell unifcell = simulate_mean_cell(
        DistSpec::uniform(0, 1), LossSpec::modified_squared(), 750, 500, 20240103);
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "exp(1): n1/n = %.4f (want .500 +/- .0005); U(0,1): %.4f "
                  "(want .795 +/- .02)",
                  expcell.n1_ratio_hat, unifcell.n1_ratio_hat);
    note = buf;
    return std::abs(expcell.n1_ratio_hat - 0.500) <= 5e-4 &&
           std::abs(unifcell.n1_ratio_hat - 0.795) <= 0.02;
}

bool check_regression_mc_agreement(std::string& note) {
    const int n = 100;
    const Eigen::MatrixXd x = regression_recipe_design(n, 2);
    const RegressionStats geometry = design_geometry(x, 1.0, 3.0);
    const CvMomentEstimate est = empirical_cv_moments_regression(
        x, regression_recipe_beta(), DistSpec::normal(0, 1), 50, 2000, 2, 2);
    const double closed = random_cv_moments_normal(geometry, 50).variance;
    char buf[140];
    std::snprintf(buf, sizeof buf, "v_hat(50) = %.4f, closed form %.4f, 3 SE = %.4f",
                  est.v_hat, closed, 3.0 * est.v_se);
    note = buf;
    return std::abs(est.v_hat - closed) <= 3.0 * est.v_se;
}

bool check_regression_reference_value(std::string& note) {
    const Eigen::MatrixXd x = regression_recipe_design(100, 2);
    const RegressionStats geometry = design_geometry(x, 1.0, 3.0);
    const double closed = random_cv_moments_normal(geometry, 50).variance;
    const bool ok = std::abs(closed - 0.400) <= 0.15 * 0.400;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "closed form v(50) = %.4f vs reference 0.400 +/- 15%%%s", closed,
                  ok ? "" : " -- the reference value is not derivable from the"
                           " stated generating process at unit error variance"
                           " (see README, Known limitations)");
    note = buf;
    return ok;
}

bool check_regression_ordering(std::string& note) {
    const int n = 100;
    const Eigen::MatrixXd x = regression_recipe_design(n, 2);
    double prev_v = -1.0, prev_cv10 = -1.0;
    bool ok = true;
    for (int n1 : {50, 75, 80, 85, 90}) {
        const CvMomentEstimate est = empirical_cv_moments_regression(
            x, regression_recipe_beta(), DistSpec::normal(0, 1), n1, 2000, 2,
            2);
        const double cv10 = (est.v_hat - est.c_hat) / 10.0 + est.c_hat;
        if (est.v_hat <= prev_v || cv10 <= prev_cv10) ok = false;
        prev_v = est.v_hat;
        prev_cv10 = cv10;
    }
    note = ok ? "v and Var(CV,10) strictly increase over n1 = 50,75,80,85,90"
              : "ordering violated";
    return ok;
}

bool check_logistic_cells(std::string& note) {
    bool ok = true;
    std::string parts;
    for (int n : {60, 100}) {
        const LogisticCell cell =
            simulate_logistic_cell(DistSpec::normal(0, 1), n, 50, 20240105);
        ok = ok && cell.count_argmin_half() >= 45 && cell.all_rows_increasing();
        parts += "n=" + std::to_string(n) + ": argmin=n/2 in " +
                 std::to_string(cell.count_argmin_half()) + "/50, increasing: " +
                 (cell.all_rows_increasing() ? "all" : "NOT all") + "  ";
    }
    note = parts;
    return ok;
}

bool check_phi2(std::string& note) {
    const double as[10] = {-3.5, -2.5, -1.5, -0.75, 0.0, 0.6, 1.2, 2.0, 3.0, 4.0};
    const double rhos[10] = {0.0, 0.5, 0.9, 0.99, -0.5, -0.9, -0.99, 0.25, -0.25, 0.75};
    double worst = 0.0;
    int points = 0;
    for (double rho : rhos)
        for (double a : as)
            for (double b : as) {
                ++points;
                const double got = bivariate_normal_cdf(a, b, rho);
                const double want = cvplan_testing::phi2_quadrature_oracle(a, b, rho);
                worst = std::max(worst, std::abs(got - want));
            }
    char buf[100];
    std::snprintf(buf, sizeof buf, "%d grid points, max abs error %.2e", points,
                  worst);
    note = buf;
    return worst <= 1e-6;
}

bool check_variance_bounds(std::string& note) {
    CounterRng rng(4242);
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
        const double v = 1e-9 + 10.0 * rng.uniform01();
        const double c = v * rng.uniform01();
        const int J = 1 + static_cast<int>(rng.below(128));
        const CvVarianceModel model(v, c);
        const double var = var_cv(model, J);
        const auto [lo, hi] = var_bounds(model, J);
        if (!(lo <= var + 1e-12 && var <= hi + 1e-12)) ++bad;
    }
    note = "10000 random (v,c,J), " + std::to_string(bad) + " violations";
    return bad == 0;
}

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"1", "minimum resampling sizes reproduce the 48 reference entries",
         check_table1},
        {"2", "k-fold relative efficiency reproduces 12 reference entries to .001",
         check_table2},
        {"3", "index-set moment closed forms equal exhaustive enumeration (n=4..8)",
         check_lemma_oracle},
        {"4", "optimal n1 closed form equals the integer-grid argmin", check_optimal_n1},
        {"5", "sample-mean study, squared loss, N(0,1), n=750, 500 reps",
         check_mean_rule_normal},
        {"6", "sample-mean study, modified squared loss, n=750 (loss x dist interaction)",
         check_mean_rule_modsq},
        {"7a", "regression: Monte Carlo v(50) within 3 SE of closed form (n=100)",
         check_regression_mc_agreement},
        {"7b", "regression: closed form v(50) within 15% of reference 0.400",
         check_regression_reference_value},
        {"7c", "regression: variance ordering across n1 fractions",
         check_regression_ordering},
        {"8", "classification: argmin n1 = n/2 in >= 45/50 seeded runs, curves increasing",
         check_logistic_cells},
        {"9", "bivariate normal CDF within 1e-6 of the quadrature oracle (1000 points)",
         check_phi2},
        {"10", "variance bounds bracket Var(mu_CV,J) on 10^4 random triples",
         check_variance_bounds},
    };

    int failures = 0;
    for (const Check& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        std::string note;
        bool ok = false;
        try {
            ok = check.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%s criterion %-3s %s [%s] (%.1fs)\n", ok ? "PASS" : "FAIL",
                    check.id.c_str(), check.label.c_str(), note.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures > 0)
        std::printf("%d check(s) failed\n", failures);
    else
        std::printf("all checks passed\n");
    return failures;
}
