#include <doctest.h>

#include <cmath>

#include "cvplan/index_sets.hpp"
#include "cvplan/logistic.hpp"
#include "cvplan/montecarlo.hpp"
#include "cvplan/normal.hpp"
#include "cvplan/rng.hpp"
#include "support/quadrature.hpp"

using namespace cvplan;

namespace {

// Seeded dataset from the classification simulation recipe.
struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Dataset recipe_dataset(int n, std::uint64_t seed) {
    Dataset d;
    d.x = logistic_recipe_design(n, seed);
    const Eigen::VectorXd signal = d.x * logistic_recipe_beta();
    CounterRng rng = CounterRng::stream(seed, 1, 1);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = signal(i) + std_normal_quantile(rng.uniform_open01());
        const double p = 1.0 / (1.0 + std::exp(-t));
        d.y(i) = rng.uniform01() < p ? 1.0 : 0.0;
    }
    return d;
}

// Exact Var(mu_hat_j) by enumerating every training subset of size n1:
// E mu^2 = C(n,n1)^-1 sum_S (1/n2^2)[sum_{i in S^c} e_ii
//                                    + sum_{i != i' in S^c} e_ii'].
double enumerated_variance(const Eigen::VectorXd& e_i,
                           const Eigen::MatrixXd& e_pair, int n, int n1) {
    std::vector<int> comb(static_cast<std::size_t>(n1));
    for (int i = 0; i < n1; ++i) comb[static_cast<std::size_t>(i)] = i;
    const double n2 = n - n1;
    double total_sq = 0.0;
    long count = 0;
    auto next = [&]() {
        int i = n1 - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - n1 + i) --i;
        if (i < 0) return false;
        ++comb[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < n1; ++t)
            comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
        return true;
    };
    do {
        std::vector<bool> in_s(static_cast<std::size_t>(n), false);
        for (int v : comb) in_s[static_cast<std::size_t>(v)] = true;
        double sq = 0.0;
        for (int i = 0; i < n; ++i) {
            if (in_s[static_cast<std::size_t>(i)]) continue;
            sq += e_pair(i, i);
            for (int j = 0; j < n; ++j)
                if (j != i && !in_s[static_cast<std::size_t>(j)]) sq += e_pair(i, j);
        }
        total_sq += sq / (n2 * n2);
        ++count;
    } while (next());
    const double mean = e_i.mean();
    return total_sq / static_cast<double>(count) - mean * mean;
}

}  // namespace

TEST_CASE("intercept-only fits have closed-form coefficients") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(8, 1);
    Eigen::VectorXd y(8);
    y << 1, 0, 1, 0, 1, 0, 1, 0;
    CHECK(fit_logistic(x, y).beta_hat(0) == doctest::Approx(0.0).epsilon(1e-6));

    Eigen::VectorXd y75(8);
    y75 << 1, 1, 1, 0, 1, 1, 1, 0;
    CHECK(fit_logistic(x, y75).beta_hat(0) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-6));
}

TEST_CASE("degenerate label configurations are rejected") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(6, 1);
    CHECK_THROWS_AS(fit_logistic(x, Eigen::VectorXd::Ones(6)), NoVariation);
    Eigen::VectorXd bad(6);
    bad << 0, 1, 0.5, 1, 0, 1;
    CHECK_THROWS_AS(fit_logistic(x, bad), DomainError);

    // perfectly separated data diverges
    Eigen::MatrixXd xs(10, 2);
    Eigen::VectorXd ys(10);
    for (int i = 0; i < 10; ++i) {
        const double z = i - 4.5;
        xs(i, 0) = 1.0;
        xs(i, 1) = z;
        ys(i) = z > 0 ? 1.0 : 0.0;
    }
    CHECK_THROWS_AS(fit_logistic(xs, ys), Separation);
}

TEST_CASE("recipe fit converges with probabilities inside (0,1)") {
    const Dataset d = recipe_dataset(60, 41);
    const LogisticDesign design = make_logistic_design(d.x, d.y);
    CHECK(design.n == 60);
    for (int i = 0; i < design.n; ++i) {
        CHECK(design.p_i(i) > 0.0);
        CHECK(design.p_i(i) < 1.0);
        CHECK(design.rho_pair(i, i) == doctest::Approx(1.0));
    }
    CHECK(design.rho_pair.isApprox(design.rho_pair.transpose(), 1e-12));
    CHECK(design.rho_pair.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("error moments at zeta = 0 and rho = 0") {
    LogisticDesign design;
    design.n = 3;
    design.p = 1;
    design.sigma2_hat = 1.0;
    design.p_i = Eigen::Vector3d(0.3, 0.6, 0.8);
    design.zeta_i = Eigen::Vector3d::Zero();
    design.rho_pair = Eigen::Matrix3d::Identity();
    const ErrorMoments m = classification_error_moments(design, 2);
    for (int i = 0; i < 3; ++i)
        CHECK(m.e_i(i) == doctest::Approx(0.5));  // coin-flip boundary
    // rho = 0 factorizes the pair moments
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(m.e_pair(i, j) == doctest::Approx(m.e_i(i) * m.e_i(j)).epsilon(1e-9));
}

TEST_CASE("pair moment matches direct quadrature of the defining probability") {
    LogisticDesign design;
    design.n = 2;
    design.p = 1;
    design.sigma2_hat = 1.0;
    design.p_i = Eigen::Vector2d(0.7, 0.45);
    design.zeta_i = Eigen::Vector2d(0.3, -0.2);
    design.rho_pair.resize(2, 2);
    design.rho_pair << 1.0, 0.4, 0.4, 1.0;
    // n1 = 30 is outside the n = 2 sweep range, so evaluate the kernel the
    // way the sweep would at root-n1 = sqrt(30).
    const double s = std::sqrt(30.0);
    const double ai = -s * 0.3, aj = s * 0.2;
    using cvplan_testing::phi2_quadrature_oracle;
    const double expected = phi2_quadrature_oracle(ai, aj, 0.4) * 0.7 * 0.45 +
                            phi2_quadrature_oracle(ai, -aj, -0.4) * 0.7 * 0.55 +
                            phi2_quadrature_oracle(-ai, aj, -0.4) * 0.3 * 0.45 +
                            phi2_quadrature_oracle(-ai, -aj, 0.4) * 0.3 * 0.55;
    const double got =
        bivariate_normal_cdf(ai, aj, 0.4) * 0.7 * 0.45 +
        bivariate_normal_cdf(ai, -aj, -0.4) * 0.7 * 0.55 +
        bivariate_normal_cdf(-ai, aj, -0.4) * 0.3 * 0.45 +
        bivariate_normal_cdf(-ai, -aj, 0.4) * 0.3 * 0.55;
    CHECK(got == doctest::Approx(expected).epsilon(1e-7));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
}

TEST_CASE("pair moments stay in [0,1] across the sweep") {
    const Dataset d = recipe_dataset(30, 43);
    const LogisticDesign design = make_logistic_design(d.x, d.y);
    for (int n1 : {15, 22, 29}) {
        const ErrorMoments m = classification_error_moments(design, n1);
        CHECK(m.e_pair.minCoeff() >= 0.0);
        CHECK(m.e_pair.maxCoeff() <= 1.0);
    }
}

TEST_CASE("general variance equals split enumeration") {
    // constant moments: iid-like reduction (e - e^2)/n2
    {
        const int n = 6, n1 = 3;
        const double e = 0.37;
        Eigen::VectorXd e_i = Eigen::VectorXd::Constant(n, e);
        Eigen::MatrixXd e_pair = Eigen::MatrixXd::Constant(n, n, e * e);
        e_pair.diagonal() = e_i;
        const double v = var_mu_j_general(e_i, e_pair, n, n1);
        CHECK(v == doctest::Approx((e - e * e) / 3.0).epsilon(1e-12));
        CHECK(v == doctest::Approx(enumerated_variance(e_i, e_pair, n, n1)).epsilon(1e-12));
    }
    // heterogeneous symmetric moments, all split sizes at n = 6, 8
    CounterRng rng(99);
    for (int n : {6, 8}) {
        Eigen::VectorXd e_i(n);
        for (int i = 0; i < n; ++i) e_i(i) = 0.1 + 0.8 * rng.uniform01();
        Eigen::MatrixXd e_pair(n, n);
        for (int i = 0; i < n; ++i) {
            e_pair(i, i) = e_i(i);
            for (int j = i + 1; j < n; ++j) {
                // valid-ish second moments near independence
                const double v = e_i(i) * e_i(j) * (0.9 + 0.2 * rng.uniform01());
                e_pair(i, j) = v;
                e_pair(j, i) = v;
            }
        }
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1) {
            CAPTURE(n);
            CAPTURE(n1);
            CHECK(var_mu_j_general(e_i, e_pair, n, n1) ==
                  doctest::Approx(enumerated_variance(e_i, e_pair, n, n1))
                      .epsilon(1e-12));
        }
    }
    // LOOCV edge: n2 = 1
    {
        const int n = 6;
        Eigen::VectorXd e_i(n);
        for (int i = 0; i < n; ++i) e_i(i) = 0.2 + 0.1 * i;
        Eigen::MatrixXd e_pair = e_i * e_i.transpose();
        e_pair.diagonal() = e_i;
        CHECK(var_mu_j_general(e_i, e_pair, n, n - 1) ==
              doctest::Approx(enumerated_variance(e_i, e_pair, n, n - 1))
                  .epsilon(1e-12));
    }
}

TEST_CASE("constant-moment variance agrees with the exact rational oracle") {
    // For constant e_i = e and e_{i,i'} = e2, the variance reduces to exact
    // index-set moments: Var = (1/n2^2)[e P(i in S^c) n + e2 P(i,i' in S^c)
    // n(n-1)] - e^2, all rational.
    using cvplan::MomentTag;
    using cvplan::Rational;
    for (int n : {6, 8}) {
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1) {
            const Rational e(37, 100), e2(1369, 10000);  // e2 = e^2
            const cvplan::SplitGeometry geom(n, n1);
            const Rational p_single = cvplan::lemma_moment(MomentTag::a, geom);
            const Rational p_pair = cvplan::lemma_moment(MomentTag::e, geom);
            const int n2 = n - n1;
            const Rational second =
                (e * p_single * n + e2 * p_pair * n * (n - 1)) / (n2 * n2);
            const Rational exact = second - e * e;

            Eigen::VectorXd e_i = Eigen::VectorXd::Constant(n, 0.37);
            Eigen::MatrixXd e_pair = Eigen::MatrixXd::Constant(n, n, 0.1369);
            e_pair.diagonal() = e_i;
            CHECK(var_mu_j_general(e_i, e_pair, n, n1) ==
                  doctest::Approx(cvplan::to_double(exact)).epsilon(1e-13));
        }
    }
}

TEST_CASE("shape guards") {
    Eigen::VectorXd e_i = Eigen::VectorXd::Constant(4, 0.4);
    Eigen::MatrixXd e_pair = Eigen::MatrixXd::Constant(4, 4, 0.16);
    e_pair.diagonal() = e_i;
    CHECK_THROWS_AS(var_mu_j_general(e_i, e_pair, 5, 3), ShapeMismatch);
    Eigen::MatrixXd asym = e_pair;
    asym(0, 1) = 0.9;
    CHECK_THROWS_AS(var_mu_j_general(e_i, asym, 4, 2), ShapeMismatch);
    Eigen::MatrixXd bad_diag = e_pair;
    bad_diag(2, 2) = 0.1;
    CHECK_THROWS_AS(var_mu_j_general(e_i, bad_diag, 4, 2), ShapeMismatch);
}

TEST_CASE("algorithm sweep picks half and its curve is minimal there") {
    for (std::uint64_t seed : {101ULL, 202ULL}) {
        const Dataset d = recipe_dataset(60, seed);
        const VarianceCurve curve = algorithm1_optimal_n1(d.x, d.y);
        CHECK(curve.entries.size() == 30);
        CHECK(curve.entries.front().n1 == 30);
        CHECK(curve.entries.back().n1 == 59);
        CHECK(curve.argmin_n1 == 30);
        for (const auto& pt : curve.entries) {
            CHECK(pt.v > 0.0);
            CHECK(pt.v >= curve.v_at(curve.argmin_n1));
        }
        // pattern of the published rows: increasing across late fractions
        CHECK(curve.v_at(45) < curve.v_at(48));
        CHECK(curve.v_at(48) < curve.v_at(51));
        CHECK(curve.v_at(51) < curve.v_at(54));
    }
}
