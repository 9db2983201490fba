// cvplan: designs cross-validation experiments by minimizing the variance
// of the CV estimator of the generalization error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cvplan/csv.hpp"
#include "cvplan/cv_variance.hpp"
#include "cvplan/index_sets.hpp"
#include "cvplan/logistic.hpp"
#include "cvplan/loss.hpp"
#include "cvplan/montecarlo.hpp"
#include "cvplan/regression.hpp"
#include "cvplan/split_optimizer.hpp"

using json = nlohmann::ordered_json;
using namespace cvplan;

namespace {

LossSpec loss_from_flag(const std::string& name) {
    if (name == "squared") return LossSpec::squared();
    if (name == "qsqrt") return LossSpec::q_sqrt();
    if (name == "absapprox") return LossSpec::approx_absolute();
    if (name == "modsq") return LossSpec::modified_squared();
    if (name == "doublesq") return LossSpec::double_squared();
    throw InvalidConfig("unknown loss: " + name +
                        " (expected squared|qsqrt|absapprox|modsq|doublesq)");
}

void emit(const json& out, const std::string& format) {
    if (format == "json") {
        std::cout << out.dump(2) << "\n";
        return;
    }
    // aligned text: one key per line, config first
    for (const auto& [key, value] : out.items()) {
        if (value.is_object()) {
            std::cout << key << ":\n";
            for (const auto& [k2, v2] : value.items())
                std::cout << "  " << k2 << " = " << v2.dump() << "\n";
        } else {
            std::cout << key << " = " << value.dump() << "\n";
        }
    }
}

json plan_json(const ResamplingPlan& plan) {
    json j;
    j["J"] = plan.J;
    j["achieved_re"] = plan.achieved_re;
    if (plan.J >= 2) j["achieved_rr"] = plan.achieved_rr;
    return j;
}

MomentParams params_from_args(const std::optional<std::string>& theoretical,
                              const std::optional<std::string>& data_path,
                              const std::string& column, const LossSpec& loss,
                              int* n_inout) {
    if (theoretical) {
        std::vector<double> v;
        std::size_t pos = 0;
        const std::string& s = *theoretical;
        while (pos < s.size()) {
            std::size_t next = s.find(',', pos);
            if (next == std::string::npos) next = s.size();
            v.push_back(std::stod(s.substr(pos, next - pos)));
            pos = next + 1;
        }
        if (v.size() != 4)
            throw InvalidConfig("--theoretical expects alpha,beta,gamma,delta");
        if (*n_inout <= 0) throw InvalidConfig("--theoretical requires --n");
        MomentParams p;
        p.alpha = v[0];
        p.beta = v[1];
        p.gamma = v[2];
        p.delta = v[3];
        p.sigma2 = 0.0;
        return p.with_n(*n_inout);
    }
    if (!data_path) throw InvalidConfig("either --data or --theoretical is required");
    const CsvTable table = read_csv(*data_path);
    const std::vector<double>& xs =
        column.empty() ? table.columns.front() : table.column(column);
    if (*n_inout <= 0) *n_inout = static_cast<int>(xs.size());
    return estimate_moment_params(loss, xs);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"cross-validation experiment designer"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    std::uint64_t seed = 20240101;
    app.add_option("--seed", seed, "RNG seed")->envname("CVPLAN_SEED");
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    // global flags may appear after the subcommand as well
    app.fallthrough();

    // plan-resamples ------------------------------------------------------
    auto* resamples = app.add_subcommand(
        "plan-resamples", "minimum resampling size for a target effectiveness "
                          "or reduction ratio");
    resamples->fallthrough();
    double rho = 0.0;
    std::optional<double> pi_target, r_target;
    resamples->add_option("--rho", rho, "correlation c/v")->required();
    resamples->add_option("--pi", pi_target, "target resampling effectiveness");
    resamples->add_option("--r", r_target, "target reduction ratio");

    // plan-split ----------------------------------------------------------
    auto* split = app.add_subcommand(
        "plan-split", "optimal training size for the sample-mean rule");
    split->fallthrough();
    std::optional<std::string> split_data, split_theory;
    std::string split_loss = "squared", split_column;
    int split_n = 0;
    split->add_option("--data", split_data, "CSV input (header required)");
    split->add_option("--column", split_column, "data column (default: first)");
    split->add_option("--theoretical", split_theory, "alpha,beta,gamma,delta");
    split->add_option("--n", split_n, "total sample size (with --theoretical)");
    split->add_option("--loss", split_loss, "loss family");

    // plan-folds ----------------------------------------------------------
    auto* folds = app.add_subcommand("plan-folds", "optimal k for k-fold CV");
    folds->fallthrough();
    std::optional<std::string> folds_data, folds_theory;
    std::string folds_loss = "squared", folds_column;
    int folds_n = 0;
    folds->add_option("--data", folds_data, "CSV input");
    folds->add_option("--column", folds_column, "data column (default: first)");
    folds->add_option("--theoretical", folds_theory, "alpha,beta,gamma,delta");
    folds->add_option("--n", folds_n, "total sample size (with --theoretical)");
    folds->add_option("--loss", folds_loss, "loss family");

    // regression-plan -----------------------------------------------------
    auto* regr = app.add_subcommand(
        "regression-plan", "closed-form CV design for linear regression");
    regr->fallthrough();
    std::string regr_data, regr_response;
    regr->add_option("--data", regr_data, "CSV input")->required();
    regr->add_option("--response", regr_response, "response column")->required();

    // logistic-plan -------------------------------------------------------
    auto* logi = app.add_subcommand(
        "logistic-plan", "numerically optimal training size for 0/1-loss "
                         "classification");
    logi->fallthrough();
    std::string logi_data, logi_response, logi_curve_csv;
    double logi_sigma2 = 1.0;
    bool logi_fisher = false;
    logi->add_option("--data", logi_data, "CSV input")->required();
    logi->add_option("--response", logi_response, "0/1 response column")->required();
    logi->add_option("--curve-csv", logi_curve_csv, "write the (n1, v) curve");
    logi->add_option("--sigma2", logi_sigma2, "latent error scale (default 1)");
    logi->add_flag("--fisher-v", logi_fisher,
                   "use inverse Fisher information for V (variant)");

    // simulate ------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo studies");
    sim->fallthrough();
    std::string sim_table, sim_out, sim_loss = "squared", sim_dist = "normal:0,1";
    double sim_scale = 0.05;
    int sim_n = 100, sim_n1 = 0, sim_reps = 500, sim_splits = 2;
    std::vector<int> sim_n_filter;
    bool sim_sweep = false;
    sim->add_option("--table", sim_table, "table id (T4|T5|T6|T7|T8|T9|T11)");
    sim->add_option("--scale", sim_scale, "fraction of the published rep count");
    sim->add_option("--out", sim_out, "output CSV path (default stdout)");
    sim->add_option("--only-n", sim_n_filter, "restrict table rows to these n");
    sim->add_option("--loss", sim_loss, "free-form: loss family");
    sim->add_option("--dist", sim_dist,
                    "free-form: distribution (normal:mu,sigma | uniform:a,b | "
                    "t:nu[,shift] | exp:rate | lognormal | pareto:shape)");
    sim->add_option("--n", sim_n, "free-form: total sample size");
    sim->add_option("--n1", sim_n1, "free-form: training size (default ceil(n/2))");
    sim->add_option("--reps", sim_reps, "free-form: Monte Carlo repetitions");
    sim->add_option("--splits", sim_splits, "free-form: splits per repetition");
    sim->add_flag("--sweep-n1", sim_sweep,
                  "free-form: sweep n1 over ceil(n/2)..n-1 (curve data)");

    // oracle-check --------------------------------------------------------
    auto* oracle = app.add_subcommand(
        "oracle-check", "closed-form index-set moments vs exhaustive enumeration");
    oracle->fallthrough();
    int oracle_n = 0, oracle_n1 = 0;
    std::string oracle_tag;
    oracle->add_option("--n", oracle_n, "total size")->required();
    oracle->add_option("--n1", oracle_n1, "training size")->required();
    oracle->add_option("--tag", oracle_tag, "single tag (default: all)");

    CLI11_PARSE(app, argc, argv);

    json config;
    config["seed"] = seed;
    config["threads"] = threads;
    config["format"] = format;

    if (resamples->parsed()) {
        if (!pi_target && !r_target)
            throw InvalidConfig("plan-resamples: one of --pi or --r is required");
        config["rho"] = rho;
        json out;
        out["config"] = config;
        if (pi_target) {
            config["pi"] = *pi_target;
            out["config"] = config;
            out["effectiveness"] = plan_json(j_for_effectiveness(rho, *pi_target));
            out["J"] = out["effectiveness"]["J"];
        }
        if (r_target) {
            config["r"] = *r_target;
            out["config"] = config;
            out["reduction"] = plan_json(j_for_reduction(rho, *r_target));
            if (!out.contains("J")) out["J"] = out["reduction"]["J"];
        }
        emit(out, format);
        return 0;
    }

    if (split->parsed()) {
        const LossSpec loss = loss_from_flag(split_loss);
        config["loss"] = split_loss;
        const MomentParams params =
            params_from_args(split_theory, split_data, split_column, loss, &split_n);
        const int n = split_n > 0 ? split_n : params.n;
        const SplitPlan plan = optimal_n1(n, params);
        config["n"] = n;
        json out;
        out["config"] = config;
        out["n"] = n;
        out["n1_opt"] = plan.n1_opt;
        out["n2"] = n - plan.n1_opt;
        out["v"] = plan.v_opt;
        out["c"] = plan.c_approx;
        out["rho"] = plan.rho_opt;
        out["method"] =
            plan.method == SplitMethod::ClosedForm ? "closed_form" : "grid_argmin";
        if (plan.degenerate_b) out["degenerate_b"] = true;
        json j_re, j_rr;
        for (double pi : {.8, .85, .9, .95})
            j_re[std::to_string(pi).substr(0, 4)] =
                j_for_effectiveness(plan.rho_opt, pi).J;
        for (double r : {.1, .05, .025, .01})
            j_rr[std::to_string(r).substr(0, 5)] = j_for_reduction(plan.rho_opt, r).J;
        out["J_re"] = j_re;
        out["J_rr"] = j_rr;
        emit(out, format);
        return 0;
    }

    if (folds->parsed()) {
        const LossSpec loss = loss_from_flag(folds_loss);
        config["loss"] = folds_loss;
        const MomentParams params =
            params_from_args(folds_theory, folds_data, folds_column, loss, &folds_n);
        const int n = folds_n > 0 ? folds_n : params.n;
        const FoldPlan plan = optimal_k(n, params);
        config["n"] = n;
        json out;
        out["config"] = config;
        out["n"] = n;
        out["k_opt"] = plan.k_opt;
        out["gamma_plus_delta"] = params.gamma + params.delta;
        json curve = json::array();
        for (std::size_t i = 0; i < plan.divisors.size(); ++i)
            curve.push_back({{"k", plan.divisors[i]},
                             {"variance", plan.variance[i]},
                             {"relative_efficiency", plan.relative_efficiency[i]}});
        out["variance_curve"] = curve;
        emit(out, format);
        return 0;
    }

    if (regr->parsed()) {
        const CsvTable table = read_csv(regr_data);
        const DesignData data = split_design(table, regr_response);
        const RegressionStats stats = design_stats(data.x, data.y);
        const RegressionSplit opt = regression_optimal_split(stats);
        config["data"] = regr_data;
        config["response"] = regr_response;
        json out;
        out["config"] = config;
        out["n"] = stats.n;
        out["p"] = stats.p;
        out["theta"] = stats.theta;
        out["sigma2"] = stats.sigma2_hat;
        out["mu4"] = stats.mu4_hat;
        out["n1_opt"] = opt.n1_opt;
        out["k_opt"] = opt.k_opt;
        json curve = json::array();
        for (int n1 = (stats.n + 1) / 2; n1 <= stats.n - 1; ++n1)
            curve.push_back(
                {{"n1", n1}, {"var", random_cv_moments_normal(stats, n1).variance}});
        out["variance_curve"] = curve;
        json rows = json::array();
        const double fr[5] = {.5, .75, .80, .85, .90};
        for (double f : fr) {
            const int n1 = std::max((stats.n + 1) / 2,
                                    static_cast<int>(std::lround(f * stats.n)));
            if (n1 > stats.n - 1) continue;
            const RegressionCvMoments m = random_cv_moments_normal(stats, n1);
            json row;
            row["n1"] = n1;
            row["var_mu_j"] = m.variance;
            const CvVarianceModel model(m.variance, std::max(0.0, m.covariance));
            row["var_cv_10"] = var_cv(model, 10);
            row["var_cv_15"] = var_cv(model, 15);
            row["var_cv_inf"] = m.covariance;
            rows.push_back(row);
        }
        out["table"] = rows;
        emit(out, format);
        return 0;
    }

    if (logi->parsed()) {
        const CsvTable table = read_csv(logi_data);
        const DesignData data = split_design(table, logi_response);
        LogisticOptions options;
        options.sigma2 = logi_sigma2;
        options.use_fisher_information = logi_fisher;
        const VarianceCurve curve = algorithm1_optimal_n1(data.x, data.y, options);
        config["data"] = logi_data;
        config["response"] = logi_response;
        config["sigma2"] = logi_sigma2;
        config["fisher_v"] = logi_fisher;
        json out;
        out["config"] = config;
        out["n1_opt"] = curve.argmin_n1;
        json points = json::array();
        for (const auto& pt : curve.entries)
            points.push_back({{"n1", pt.n1}, {"v", pt.v}});
        out["curve"] = points;
        if (!logi_curve_csv.empty()) {
            std::ofstream csv(logi_curve_csv);
            if (!csv) throw InvalidConfig("cannot write " + logi_curve_csv);
            csv << "n1,v\n";
            for (const auto& pt : curve.entries) csv << pt.n1 << "," << pt.v << "\n";
            out["curve_csv"] = logi_curve_csv;
        }
        emit(out, format);
        return 0;
    }

    if (sim->parsed()) {
        if (!sim_table.empty()) {
            const SimReportSet reports = simulate_table(
                table_from_name(sim_table), sim_scale, seed, threads, sim_n_filter);
            if (sim_out.empty()) {
                write_reports_csv(std::cout, reports);
            } else {
                std::ofstream os(sim_out);
                if (!os) throw InvalidConfig("cannot write " + sim_out);
                write_reports_csv(os, reports);
                std::cout << "wrote " << reports.size() << " rows to " << sim_out
                          << "\n";
            }
            return 0;
        }
        // free-form
        const LossSpec loss = loss_from_flag(sim_loss);
        const DistSpec dist = dist_from_name(sim_dist);
        const int lo = sim_sweep ? (sim_n + 1) / 2
                                 : (sim_n1 > 0 ? sim_n1 : (sim_n + 1) / 2);
        const int hi = sim_sweep ? sim_n - 1 : lo;
        SimReportSet reports;
        for (int n1 = lo; n1 <= hi; ++n1) {
            const CvMomentEstimate est = empirical_cv_moments(
                dist, loss, sim_n, n1, sim_reps, sim_splits, seed, threads);
            SimReport rep;
            rep.config = {{"table", "free"},
                          {"loss", sim_loss},
                          {"dist", sim_dist},
                          {"n", std::to_string(sim_n)},
                          {"n1", std::to_string(n1)},
                          {"reps", std::to_string(sim_reps)},
                          {"splits", std::to_string(sim_splits)},
                          {"seed", std::to_string(seed)}};
            rep.estimates = {{"v_hat", est.v_hat},     {"c_hat", est.c_hat},
                             {"rho_hat", est.rho_hat}, {"mean_hat", est.mean_hat},
                             {"v_se", est.v_se},       {"c_se", est.c_se},
                             {"var_cv_10", (est.v_hat - est.c_hat) / 10.0 + est.c_hat},
                             {"var_cv_15", (est.v_hat - est.c_hat) / 15.0 + est.c_hat},
                             {"var_cv_inf", est.c_hat}};
            if (est.rho_hat < 0.0 || est.rho_hat > 1.0)
                rep.warnings.push_back("rho_hat outside [0,1] (sampling noise)");
            reports.push_back(std::move(rep));
        }
        if (sim_out.empty()) {
            write_reports_csv(std::cout, reports);
        } else {
            std::ofstream os(sim_out);
            if (!os) throw InvalidConfig("cannot write " + sim_out);
            write_reports_csv(os, reports);
            std::cout << "wrote " << reports.size() << " rows to " << sim_out << "\n";
        }
        return 0;
    }

    if (oracle->parsed()) {
        const SplitGeometry geom(oracle_n, oracle_n1);
        std::vector<MomentTag> tags;
        if (oracle_tag.empty())
            tags.assign(all_moment_tags().begin(), all_moment_tags().end());
        else
            tags.push_back(tag_from_name(oracle_tag));
        bool all_ok = true;
        std::printf("# oracle-check n=%d n1=%d\n", oracle_n, oracle_n1);
        std::printf("%-8s %-22s %-22s %s\n", "tag", "closed_form", "enumerated",
                    "status");
        for (MomentTag tag : tags) {
            try {
                const Rational lhs = lemma_moment(tag, geom);
                const Rational rhs = enumerate_moment(tag, geom);
                const bool ok = lhs == rhs;
                all_ok = all_ok && ok;
                std::printf("%-8s %-22s %-22s %s\n", tag_name(tag).c_str(),
                            lhs.str().c_str(), rhs.str().c_str(),
                            ok ? "PASS" : "FAIL");
            } catch (const InvalidGeometry& e) {
                std::printf("%-8s %-22s %-22s %s\n", tag_name(tag).c_str(), "-", "-",
                            (std::string("SKIP (") + e.what() + ")").c_str());
            }
        }
        return all_ok ? 0 : 1;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const SingularDesign& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Separation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NoVariation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
