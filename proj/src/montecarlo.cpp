#include "cvplan/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cvplan/logistic.hpp"
#include "cvplan/parallel.hpp"
#include "cvplan/split_optimizer.hpp"

namespace cvplan {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Substream tags: 0 draws the dataset, 1 + s draws split s.
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kSplitStream = 1;
// Fixed-design recipes draw from a reserved rep index.
constexpr std::uint64_t kDesignRep = 0xDE516EULL;

// First n1 entries of a seeded partial Fisher-Yates permutation of 0..n-1.
void draw_split(CounterRng& rng, int n, int n1, std::vector<int>& indices) {
    indices.resize(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), 0);
    for (int i = 0; i < n1; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
}

struct MomentAccumulator {
    double v = kNaN, c = kNaN, mean = kNaN;
};

// Unbiased v and c from the reps x m matrix of test-set errors.
MomentAccumulator combine(const std::vector<double>& mu, int reps, int m) {
    std::vector<double> rep_mean(static_cast<std::size_t>(reps));
    std::vector<double> rep_var(static_cast<std::size_t>(reps));
    double total = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double* row = mu.data() + static_cast<std::size_t>(r) * m;
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += row[j];
        const double mbar = s / m;
        double ss = 0.0;
        for (int j = 0; j < m; ++j) ss += (row[j] - mbar) * (row[j] - mbar);
        rep_mean[static_cast<std::size_t>(r)] = mbar;
        rep_var[static_cast<std::size_t>(r)] = ss / (m - 1);
        total += s;
    }
    double grand = 0.0;
    for (double v : rep_mean) grand += v;
    grand /= reps;
    double between = 0.0;
    for (double v : rep_mean) between += (v - grand) * (v - grand);
    between /= (reps - 1);  // estimates (v + (m-1)c)/m
    double within = 0.0;
    for (double v : rep_var) within += v;
    within /= reps;  // estimates v - c

    MomentAccumulator out;
    out.c = between - within / m;
    out.v = out.c + within;
    out.mean = total / (static_cast<double>(reps) * m);
    return out;
}

struct SeAccumulator {
    double v_se = kNaN, c_se = kNaN;
};

SeAccumulator batch_se(const std::vector<double>& mu, int reps, int m) {
    const int batches = std::clamp(reps / 4, 2, 25);
    std::vector<double> vb, cb;
    vb.reserve(static_cast<std::size_t>(batches));
    cb.reserve(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b) {
        const int lo = b * reps / batches;
        const int hi = (b + 1) * reps / batches;
        if (hi - lo < 2) continue;
        std::vector<double> slice(mu.begin() + static_cast<std::ptrdiff_t>(lo) * m,
                                  mu.begin() + static_cast<std::ptrdiff_t>(hi) * m);
        const MomentAccumulator acc = combine(slice, hi - lo, m);
        vb.push_back(acc.v);
        cb.push_back(acc.c);
    }
    auto sd_of_mean = [](const std::vector<double>& xs) {
        const double k = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= k;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (k - 1.0) / k);
    };
    SeAccumulator se;
    if (vb.size() >= 2) {
        se.v_se = sd_of_mean(vb);
        se.c_se = sd_of_mean(cb);
    }
    return se;
}

CvMomentEstimate finish_estimate(std::vector<double>&& mu, int reps, int m) {
    const MomentAccumulator acc = combine(mu, reps, m);
    const SeAccumulator se = batch_se(mu, reps, m);
    CvMomentEstimate est;
    est.v_hat = acc.v;
    est.c_hat = acc.c;
    est.rho_hat = acc.c / acc.v;
    est.mean_hat = acc.mean;
    est.v_se = se.v_se;
    est.c_se = se.c_se;
    est.reps = reps;
    est.splits_per_rep = m;
    return est;
}

void check_mc_config(int n, int n1, int reps, int m) {
    if (n1 < (n + 1) / 2 || n1 > n - 1)
        throw InvalidConfig("empirical_cv_moments: need ceil(n/2) <= n1 <= n-1");
    if (reps < 2 || m < 2)
        throw InvalidConfig("empirical_cv_moments: need reps >= 2, splits_per_rep >= 2");
}

int fraction_point(int n, double f) { return static_cast<int>(std::lround(f * n)); }

}  // namespace

CvMomentEstimate empirical_cv_moments(const DistSpec& dist, const LossSpec& loss_in,
                                      int n, int n1, int reps, int splits_per_rep,
                                      std::uint64_t seed, int threads) {
    check_mc_config(n, n1, reps, splits_per_rep);
    const LossSpec loss = loss_in.resolved(n);
    const int m = splits_per_rep;
    std::vector<double> mu(static_cast<std::size_t>(reps) * m);

    parallel_for(
        reps,
        [&](int r) {
            std::vector<double> xs(static_cast<std::size_t>(n));
            CounterRng data_rng = CounterRng::stream(seed, static_cast<std::uint64_t>(r), kDataStream);
            sample_into(dist, data_rng, xs);
            std::vector<int> indices;
            for (int s = 0; s < m; ++s) {
                CounterRng split_rng = CounterRng::stream(
                    seed, static_cast<std::uint64_t>(r), kSplitStream + static_cast<std::uint64_t>(s));
                draw_split(split_rng, n, n1, indices);
                double train_mean = 0.0;
                for (int i = 0; i < n1; ++i) train_mean += xs[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])];
                train_mean /= n1;
                double err = 0.0;
                for (int i = n1; i < n; ++i)
                    err += loss.value(train_mean, xs[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])]);
                mu[static_cast<std::size_t>(r) * m + static_cast<std::size_t>(s)] = err / (n - n1);
            }
        },
        threads);
    return finish_estimate(std::move(mu), reps, m);
}

CvMomentEstimate empirical_cv_moments_regression(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, const DistSpec& errors,
    int n1, int reps, int splits_per_rep, std::uint64_t seed, int threads) {
    const int n = static_cast<int>(x.rows());
    const int p = static_cast<int>(x.cols());
    if (beta.size() != p)
        throw ShapeMismatch("empirical_cv_moments_regression: beta length != cols");
    check_mc_config(n, n1, reps, splits_per_rep);
    const int m = splits_per_rep;
    const int n2 = n - n1;
    const Eigen::VectorXd signal = x * beta;
    std::vector<double> mu(static_cast<std::size_t>(reps) * m);

    parallel_for(
        reps,
        [&](int r) {
            CounterRng data_rng = CounterRng::stream(seed, static_cast<std::uint64_t>(r), kDataStream);
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) y(i) = signal(i) + sample_one(errors, data_rng);
            std::vector<int> indices;
            Eigen::MatrixXd xs(n1, p);
            Eigen::VectorXd ys(n1);
            for (int s = 0; s < m; ++s) {
                CounterRng split_rng = CounterRng::stream(
                    seed, static_cast<std::uint64_t>(r), kSplitStream + static_cast<std::uint64_t>(s));
                draw_split(split_rng, n, n1, indices);
                for (int i = 0; i < n1; ++i) {
                    xs.row(i) = x.row(indices[static_cast<std::size_t>(i)]);
                    ys(i) = y(indices[static_cast<std::size_t>(i)]);
                }
                const Eigen::VectorXd bhat =
                    (xs.transpose() * xs).ldlt().solve(xs.transpose() * ys);
                double err = 0.0;
                for (int i = n1; i < n; ++i) {
                    const int row = indices[static_cast<std::size_t>(i)];
                    const double resid = y(row) - x.row(row).dot(bhat);
                    err += resid * resid;
                }
                mu[static_cast<std::size_t>(r) * m + static_cast<std::size_t>(s)] = err / n2;
            }
        },
        threads);
    return finish_estimate(std::move(mu), reps, m);
}

int required_moments(const LossSpec& loss) {
    return loss.family() == LossFamily::DoubleSquared ? 8 : 6;
}

MomentParams population_moment_params(const LossSpec& loss_in, const DistSpec& dist,
                                      int n_for_d) {
    const double mu = dist.mean();
    const double sigma2 = dist.variance();
    MomentParams p;
    p.mu = mu;
    p.sigma2 = sigma2;

    switch (loss_in.family()) {
        case LossFamily::Squared: {
            p.alpha = 0.0;
            p.beta = dist.central_moment(4) - sigma2 * sigma2;
            p.gamma = 4.0 * sigma2 * sigma2;
            p.delta = 0.0;
            return p;
        }
        case LossFamily::ModifiedSquared: {
            p.alpha = 4.0 * mu * mu * sigma2;
            p.beta = dist.central_moment(4) - sigma2 * sigma2;
            p.gamma = 4.0 * sigma2 * sigma2;
            p.delta = 0.0;
            return p;
        }
        case LossFamily::DoubleSquared: {
            const double c = mu * mu;
            auto rm = [&](int k) { return dist.raw_moment(k); };
            const double w1 = rm(2) - c;
            const double w2 = rm(4) - 2 * c * rm(2) + c * c;
            const double w3 = rm(6) - 3 * c * rm(4) + 3 * c * c * rm(2) - c * c * c;
            const double w4 = rm(8) - 4 * c * rm(6) + 6 * c * c * rm(4) -
                              4 * c * c * c * rm(2) + c * c * c * c;
            p.alpha = 16.0 * mu * mu * sigma2 * w1 * w1;
            p.beta = w4 - w2 * w2;
            p.gamma = 16.0 * mu * mu * sigma2 * (w2 - w1 * w1);
            p.delta = -4.0 * sigma2 * (w3 - w2 * w1);
            return p;
        }
        case LossFamily::QSqrt:
        case LossFamily::CustomQ: {
            const QGenerator& gen = loss_in.generator();
            const double eq = expectation(dist, [&](double x) { return gen.q(x); });
            const double eq2 =
                expectation(dist, [&](double x) { return gen.q(x) * gen.q(x); });
            const double exq =
                expectation(dist, [&](double x) { return x * gen.q(x); });
            const double var_q = eq2 - eq * eq;
            const double cov_x_q = exq - mu * eq;
            MomentParams out = qclass_population_params(gen, mu, sigma2, var_q, cov_x_q);
            return out;
        }
        case LossFamily::ApproxAbsolute: {
            LossSpec loss = loss_in;
            if (!loss.d_is_bound()) {
                if (n_for_d <= 0)
                    throw InvalidParams("population_moment_params: auto d needs n");
                loss = loss_in.resolved(n_for_d);
            }
            const double el = expectation(dist, [&](double x) { return loss.value(mu, x); });
            const double el2 = expectation(dist, [&](double x) {
                const double v = loss.value(mu, x);
                return v * v;
            });
            const double ed1 = expectation(dist, [&](double x) { return loss.d1(mu, x); });
            const double ed1sq = expectation(dist, [&](double x) {
                const double v = loss.d1(mu, x);
                return v * v;
            });
            const double ed2 = expectation(dist, [&](double x) { return loss.d2(mu, x); });
            const double eld2 = expectation(
                dist, [&](double x) { return loss.value(mu, x) * loss.d2(mu, x); });
            p.alpha = sigma2 * ed1 * ed1;
            p.beta = el2 - el * el;
            p.gamma = sigma2 * (ed1sq - ed1 * ed1);
            p.delta = sigma2 * (eld2 - el * ed2);
            return p;
        }
    }
    throw InvalidParams("population_moment_params: unknown family");
}

MeanCell simulate_mean_cell(const DistSpec& dist, const LossSpec& loss, int n,
                            int reps, std::uint64_t seed, int threads) {
    if (reps < 2) throw InvalidConfig("simulate_mean_cell: need reps >= 2");
    MeanCell cell;
    cell.reps = reps;
    if (dist.finite_moments() < required_moments(loss))
        cell.warnings.push_back(dist.name() + " has fewer than " +
                                std::to_string(required_moments(loss)) +
                                " moments required by " + loss.name());

    // theoretical columns
    cell.n1_ratio_theory = kNaN;
    cell.rho_opt_theory = kNaN;
    cell.k_ratio_theory = kNaN;
    const MomentParams pop = population_moment_params(loss, dist, n);
    const bool pop_ok = std::isfinite(pop.alpha) && std::isfinite(pop.beta) &&
                        std::isfinite(pop.gamma) && std::isfinite(pop.delta);
    if (pop_ok) {
        const SplitPlan plan = optimal_n1(n, pop);
        cell.n1_ratio_theory = static_cast<double>(plan.n1_opt) / n;
        cell.rho_opt_theory = plan.rho_opt;
        cell.k_ratio_theory =
            static_cast<double>(optimal_k(n, pop).k_opt) / n;
    } else {
        cell.warnings.push_back("population moments unavailable; theory columns NaN");
    }

    std::vector<double> ratio(static_cast<std::size_t>(reps));
    std::vector<double> rho(static_cast<std::size_t>(reps));
    std::vector<double> kratio(static_cast<std::size_t>(reps));
    parallel_for(
        reps,
        [&](int r) {
            std::vector<double> xs(static_cast<std::size_t>(n));
            CounterRng rng = CounterRng::stream(seed, static_cast<std::uint64_t>(r), kDataStream);
            sample_into(dist, rng, xs);
            const MomentParams est = estimate_moment_params(loss, xs);
            const SplitPlan plan = optimal_n1(n, est);
            ratio[static_cast<std::size_t>(r)] = static_cast<double>(plan.n1_opt) / n;
            rho[static_cast<std::size_t>(r)] = plan.rho_opt;
            kratio[static_cast<std::size_t>(r)] =
                static_cast<double>(optimal_k(n, est).k_opt) / n;
        },
        threads);

    auto mean_of = [](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    auto mse_vs = [](const std::vector<double>& xs, double ref) {
        if (!std::isfinite(ref)) return kNaN;
        double s = 0.0;
        for (double x : xs) s += (x - ref) * (x - ref);
        return s / static_cast<double>(xs.size());
    };
    cell.n1_ratio_hat = mean_of(ratio);
    cell.rho_opt_hat = mean_of(rho);
    cell.k_ratio_hat = mean_of(kratio);
    cell.n1_ratio_mse = mse_vs(ratio, cell.n1_ratio_theory);
    cell.rho_opt_mse = mse_vs(rho, cell.rho_opt_theory);
    cell.k_ratio_mse = mse_vs(kratio, cell.k_ratio_theory);
    return cell;
}

Eigen::MatrixXd regression_recipe_design(int n, std::uint64_t seed) {
    CounterRng rng = CounterRng::stream(seed, kDesignRep, kDataStream);
    Eigen::MatrixXd x(n, 5);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.uniform01() < 0.6 ? 1.0 : 0.0;
        x(i, 2) = static_cast<double>(sample_poisson(2.0, rng));
        x(i, 3) = 5.0 * rng.uniform01();
        x(i, 4) = 3.0 * rng.uniform01();
    }
    return x;
}

Eigen::VectorXd regression_recipe_beta() {
    Eigen::VectorXd beta(5);
    beta << 1.0, 1.0, 1.0, -1.0, 1.0;
    return beta;
}

Eigen::MatrixXd logistic_recipe_design(int n, std::uint64_t seed) {
    CounterRng rng = CounterRng::stream(seed, kDesignRep, kDataStream);
    Eigen::MatrixXd x(n, 4);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.uniform01() < 0.6 ? 1.0 : 0.0;
        x(i, 2) = static_cast<double>(sample_poisson(2.0, rng));
        x(i, 3) = static_cast<double>(rng.below(5));
    }
    return x;
}

Eigen::VectorXd logistic_recipe_beta() {
    Eigen::VectorXd beta(4);
    beta << 1.0, 1.0, 1.0, -1.0;
    return beta;
}

int LogisticCell::count_argmin_half() const {
    const int half = (n + 1) / 2;
    return static_cast<int>(std::count(argmins.begin(), argmins.end(), half));
}

bool LogisticCell::row_increasing(std::size_t r) const {
    const auto& row = v_rows[r];
    return row[1] < row[2] && row[2] < row[3] && row[3] < row[4];
}

bool LogisticCell::all_rows_increasing() const {
    for (std::size_t r = 0; r < v_rows.size(); ++r)
        if (!row_increasing(r)) return false;
    return true;
}

LogisticCell simulate_logistic_cell(const DistSpec& errors, int n, int reps,
                                    std::uint64_t seed, int threads) {
    if (reps < 1) throw InvalidConfig("simulate_logistic_cell: need reps >= 1");
    const Eigen::MatrixXd x = logistic_recipe_design(n, seed);
    const Eigen::VectorXd beta = logistic_recipe_beta();
    const Eigen::VectorXd signal = x * beta;

    LogisticCell cell;
    cell.n = n;
    cell.reps = reps;
    cell.argmins.resize(static_cast<std::size_t>(reps));
    cell.v_rows.resize(static_cast<std::size_t>(reps));

    const int points[5] = {(n + 1) / 2, fraction_point(n, .75),
                           fraction_point(n, .80), fraction_point(n, .85),
                           fraction_point(n, .90)};

    parallel_for(
        reps,
        [&](int r) {
            // deterministic retry on degenerate label draws
            for (std::uint64_t attempt = 0;; ++attempt) {
                CounterRng rng = CounterRng::stream(
                    seed, static_cast<std::uint64_t>(r), kSplitStream + 16 * attempt);
                Eigen::VectorXd y(n);
                for (int i = 0; i < n; ++i) {
                    const double eps = sample_one(errors, rng);
                    const double t = signal(i) + eps;
                    const double p = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                              : std::exp(t) / (1.0 + std::exp(t));
                    y(i) = rng.uniform01() < p ? 1.0 : 0.0;
                }
                try {
                    const VarianceCurve curve = algorithm1_optimal_n1(x, y);
                    cell.argmins[static_cast<std::size_t>(r)] = curve.argmin_n1;
                    for (int j = 0; j < 5; ++j)
                        cell.v_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                            curve.v_at(points[j]);
                    return;
                } catch (const NoVariation&) {
                    if (attempt >= 8) throw;
                } catch (const Separation&) {
                    if (attempt >= 8) throw;
                }
            }
        },
        threads);
    return cell;
}

TableId table_from_name(const std::string& name) {
    if (name == "T4") return TableId::T4;
    if (name == "T5") return TableId::T5;
    if (name == "T6") return TableId::T6;
    if (name == "T7") return TableId::T7;
    if (name == "T8") return TableId::T8;
    if (name == "T9") return TableId::T9;
    if (name == "T11") return TableId::T11;
    throw InvalidConfig("unknown table: " + name);
}

std::string table_name(TableId id) {
    switch (id) {
        case TableId::T4: return "T4";
        case TableId::T5: return "T5";
        case TableId::T6: return "T6";
        case TableId::T7: return "T7";
        case TableId::T8: return "T8";
        case TableId::T9: return "T9";
        case TableId::T11: return "T11";
    }
    return "?";
}

namespace {

int scaled_reps(TableId id, double scale) {
    int base = 0;
    switch (id) {
        case TableId::T4:
        case TableId::T5:
        case TableId::T6:
        case TableId::T7:
        case TableId::T8:
            base = 10000;
            break;
        case TableId::T9:
            base = 5000;
            break;
        case TableId::T11:
            base = 50;
            break;
    }
    if (!(scale > 0.0) || scale > 1.0)
        throw InvalidConfig("simulate_table: scale must be in (0, 1]");
    const int reps = static_cast<int>(std::lround(scale * base));
    if (reps < 50)
        throw InvalidConfig("simulate_table: scale * paper reps must be >= 50");
    return reps;
}

std::vector<int> filtered(std::vector<int> base, const std::vector<int>& filter) {
    if (filter.empty()) return base;
    std::vector<int> out;
    for (int n : base)
        if (std::find(filter.begin(), filter.end(), n) != filter.end())
            out.push_back(n);
    if (out.empty()) throw InvalidConfig("simulate_table: n filter excludes all rows");
    return out;
}

void push_config(SimReport& rep, TableId id, double scale, std::uint64_t seed,
                 int reps) {
    rep.config.emplace_back("table", table_name(id));
    rep.config.emplace_back("scale", std::to_string(scale));
    rep.config.emplace_back("seed", std::to_string(seed));
    rep.config.emplace_back("reps", std::to_string(reps));
}

SimReportSet mean_rule_table(TableId id, const LossSpec& loss,
                             const std::vector<DistSpec>& dists,
                             const std::vector<int>& ns, double scale,
                             std::uint64_t seed, int threads) {
    const int reps = scaled_reps(id, scale);
    SimReportSet out;
    std::uint64_t cell_index = 0;
    for (const DistSpec& dist : dists) {
        for (int n : ns) {
            const MeanCell cell = simulate_mean_cell(
                dist, loss, n, reps, mix64(seed + 1000003ULL * ++cell_index), threads);
            SimReport rep;
            push_config(rep, id, scale, seed, reps);
            rep.config.emplace_back("loss", loss.name());
            rep.config.emplace_back("dist", dist.name());
            rep.config.emplace_back("n", std::to_string(n));
            rep.estimates = {{"n1_ratio_hat", cell.n1_ratio_hat},
                             {"n1_ratio_theory", cell.n1_ratio_theory},
                             {"n1_ratio_mse", cell.n1_ratio_mse},
                             {"rho_opt_hat", cell.rho_opt_hat},
                             {"rho_opt_theory", cell.rho_opt_theory},
                             {"rho_opt_mse", cell.rho_opt_mse},
                             {"k_ratio_hat", cell.k_ratio_hat},
                             {"k_ratio_theory", cell.k_ratio_theory},
                             {"k_ratio_mse", cell.k_ratio_mse}};
            rep.warnings = cell.warnings;
            out.push_back(std::move(rep));
        }
    }
    return out;
}

}  // namespace

SimReportSet simulate_table(TableId id, double scale, std::uint64_t seed,
                            int threads, const std::vector<int>& n_filter) {
    const auto mean_ns = [&] {
        return filtered({60, 100, 301, 750, 1501, 5000}, n_filter);
    };
    switch (id) {
        case TableId::T4:
            return mean_rule_table(
                id, LossSpec::squared(),
                {DistSpec::normal(0, 1), DistSpec::uniform(-1, 1),
                 DistSpec::student_t(12), DistSpec::student_t(6),
                 DistSpec::exponential(1), DistSpec::log_normal(),
                 DistSpec::pareto(15), DistSpec::pareto(6)},
                mean_ns(), scale, seed, threads);
        case TableId::T5:
            return mean_rule_table(
                id, LossSpec::q_sqrt(),
                {DistSpec::normal(0, 1), DistSpec::uniform(-1, 1),
                 DistSpec::student_t(12), DistSpec::student_t(6),
                 DistSpec::exponential(1), DistSpec::log_normal(),
                 DistSpec::pareto(15), DistSpec::pareto(6)},
                mean_ns(), scale, seed, threads);
        case TableId::T6:
            return mean_rule_table(
                id, LossSpec::modified_squared(),
                {DistSpec::normal(1, 1), DistSpec::uniform(0, 1),
                 DistSpec::student_t(12, 5.0), DistSpec::student_t(6, 5.0),
                 DistSpec::exponential(1), DistSpec::log_normal(),
                 DistSpec::pareto(15), DistSpec::pareto(6)},
                mean_ns(), scale, seed, threads);
        case TableId::T7:
            return mean_rule_table(
                id, LossSpec::double_squared(),
                {DistSpec::normal(0, 1), DistSpec::uniform(-1, 1),
                 DistSpec::student_t(12), DistSpec::student_t(9),
                 DistSpec::exponential(1), DistSpec::log_normal(),
                 DistSpec::pareto(15), DistSpec::pareto(9)},
                mean_ns(), scale, seed, threads);
        case TableId::T8: {
            const int reps = scaled_reps(id, scale);
            const int n = n_filter.empty() ? 100 : n_filter.front();
            SimReportSet out;
            const double fractions[5] = {.50, .75, .80, .85, .90};
            for (double f : fractions) {
                const int n1 = std::max((n + 1) / 2, static_cast<int>(std::lround(f * n)));
                const CvMomentEstimate est =
                    empirical_cv_moments(DistSpec::normal(0, 1), LossSpec::squared(),
                                         n, n1, reps, 2, seed, threads);
                SimReport rep;
                push_config(rep, id, scale, seed, reps);
                rep.config.emplace_back("loss", "squared");
                rep.config.emplace_back("dist", "normal(0,1)");
                rep.config.emplace_back("n", std::to_string(n));
                rep.config.emplace_back("n1", std::to_string(n1));
                const double rho = est.rho_hat;
                rep.estimates = {
                    {"rho_hat", rho},
                    {"re_J10", resampling_effectiveness(std::clamp(rho, 1e-6, 1.0), 10)},
                    {"re_J15", resampling_effectiveness(std::clamp(rho, 1e-6, 1.0), 15)},
                    {"rr_J10", reduction_ratio(std::clamp(rho, 0.0, 1.0), 10)},
                    {"rr_J15", reduction_ratio(std::clamp(rho, 0.0, 1.0), 15)}};
                out.push_back(std::move(rep));
            }
            return out;
        }
        case TableId::T9: {
            const int reps = scaled_reps(id, scale);
            SimReportSet out;
            const std::vector<int> ns = filtered({40, 60, 100, 200}, n_filter);
            for (int n : ns) {
                const Eigen::MatrixXd x = regression_recipe_design(n, seed);
                const Eigen::VectorXd beta = regression_recipe_beta();
                const RegressionStats geometry = design_geometry(x, 1.0, 3.0);
                const double fractions[5] = {.50, .75, .80, .85, .90};
                for (double f : fractions) {
                    const int n1 =
                        std::max((n + 1) / 2, static_cast<int>(std::lround(f * n)));
                    const CvMomentEstimate est = empirical_cv_moments_regression(
                        x, beta, DistSpec::normal(0, 1), n1, reps, 2, seed, threads);
                    SimReport rep;
                    push_config(rep, id, scale, seed, reps);
                    rep.config.emplace_back("n", std::to_string(n));
                    rep.config.emplace_back("n1", std::to_string(n1));
                    rep.estimates = {
                        {"var_mu_j", est.v_hat},
                        {"var_cv_10", (est.v_hat - est.c_hat) / 10.0 + est.c_hat},
                        {"var_cv_15", (est.v_hat - est.c_hat) / 15.0 + est.c_hat},
                        {"var_cv_inf", est.c_hat},
                        {"v_se", est.v_se},
                        {"c_se", est.c_se},
                        {"closed_form_v",
                         random_cv_moments_normal(geometry, n1).variance},
                        {"n1_opt", static_cast<double>(
                                       regression_optimal_split(geometry).n1_opt)}};
                    out.push_back(std::move(rep));
                }
            }
            return out;
        }
        case TableId::T11: {
            const int reps = scaled_reps(id, scale);
            SimReportSet out;
            const std::vector<int> ns = filtered({60, 100}, n_filter);
            const std::vector<DistSpec> errs = {
                DistSpec::normal(0, 1), DistSpec::uniform(-1, 1), DistSpec::student_t(12)};
            std::uint64_t cell_index = 0;
            for (const DistSpec& err : errs) {
                for (int n : ns) {
                    const LogisticCell cell = simulate_logistic_cell(
                        err, n, reps, mix64(seed + 2000003ULL * ++cell_index), threads);
                    double mean_arg = 0.0;
                    for (int a : cell.argmins) mean_arg += a;
                    mean_arg /= reps;
                    double var_arg = 0.0;
                    for (int a : cell.argmins) var_arg += (a - mean_arg) * (a - mean_arg);
                    var_arg /= std::max(1, reps - 1);
                    std::array<double, 5> vbar{};
                    for (const auto& row : cell.v_rows)
                        for (int j = 0; j < 5; ++j) vbar[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
                    for (double& v : vbar) v /= reps;
                    SimReport rep;
                    push_config(rep, id, scale, seed, reps);
                    rep.config.emplace_back("errors", err.name());
                    rep.config.emplace_back("n", std::to_string(n));
                    rep.estimates = {
                        {"n1_opt_mean", mean_arg},
                        {"n1_opt_var", var_arg},
                        {"share_argmin_half",
                         static_cast<double>(cell.count_argmin_half()) / reps},
                        {"v_at_opt", vbar[0]},
                        {"v_at_75", vbar[1]},
                        {"v_at_80", vbar[2]},
                        {"v_at_85", vbar[3]},
                        {"v_at_90", vbar[4]},
                        {"share_rows_increasing",
                         [&] {
                             int inc = 0;
                             for (std::size_t r = 0; r < cell.v_rows.size(); ++r)
                                 inc += cell.row_increasing(r) ? 1 : 0;
                             return static_cast<double>(inc) / reps;
                         }()}};
                    out.push_back(std::move(rep));
                }
            }
            return out;
        }
    }
    throw InvalidConfig("simulate_table: unknown table");
}

namespace {

void write_csv_field(std::ostream& os, const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) {
        os << value;
        return;
    }
    os << '"';
    for (char ch : value) {
        if (ch == '"') os << '"';
        os << ch;
    }
    os << '"';
}

}  // namespace

void write_reports_csv(std::ostream& os, const SimReportSet& reports) {
    if (reports.empty()) return;
    bool first = true;
    for (const auto& [key, value] : reports.front().config) {
        (void)value;
        os << (first ? "" : ",") << key;
        first = false;
    }
    for (const auto& [key, value] : reports.front().estimates) {
        (void)value;
        os << "," << key;
    }
    os << ",warnings\n";
    for (const SimReport& rep : reports) {
        first = true;
        for (const auto& [key, value] : rep.config) {
            (void)key;
            if (!first) os << ',';
            write_csv_field(os, value);
            first = false;
        }
        os.precision(10);
        for (const auto& [key, value] : rep.estimates) {
            (void)key;
            os << "," << value;
        }
        os << ',';
        std::string joined;
        for (std::size_t i = 0; i < rep.warnings.size(); ++i)
            joined += (i ? "; " : "") + rep.warnings[i];
        write_csv_field(os, joined);
        os << "\n";
    }
}

}  // namespace cvplan
