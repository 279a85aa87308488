#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kcm/cm_tests.hpp"
#include "kcm/dgp.hpp"
#include "kcm/estimation.hpp"
#include "kcm/harness.hpp"
#include "kcm/io.hpp"

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kcm::InputError("cannot open " + path + " for writing");
    return out;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(std::cout);
    } else {
        auto out = open_out(path);
        writer(out);
    }
}

int run_gen(const std::string& dgp_name, int n, int d, std::uint64_t seed,
            const std::string& out_path) {
    const kcm::DgpKind dgp = kcm::dgp_kind_from_string(dgp_name);
    kcm::RngStream rng(seed);
    kcm::Dataset data;
    switch (dgp) {
        case kcm::DgpKind::reg_hom:
            data = kcm::gen_reg(n, d, kcm::RegVariant::hom, rng);
            break;
        case kcm::DgpKind::reg_het:
            data = kcm::gen_reg(n, d, kcm::RegVariant::het, rng);
            break;
        case kcm::DgpKind::simeq:
            data = kcm::gen_simeq(n, rng);
            break;
    }
    emit(out_path, [&](std::ostream& out) {
        kcm::write_csv(out, kcm::dataset_columns(dgp, d), data.Z);
    });
    return 0;
}

int run_test(const std::string& data_path, const std::string& model_path,
             const std::string& test_name, int bootstrap_size, double alpha, std::uint64_t seed,
             int threads) {
    const kcm::ModelConfig config = kcm::model_config_from_file(model_path);
    const kcm::CsvTable table = kcm::read_csv_file(data_path);
    const kcm::Dataset data = kcm::dataset_for_model(config.model, table);
    const kcm::TestKind kind = kcm::test_kind_from_string(test_name);

    kcm::TestOutcome outcome;
    switch (kind) {
        case kcm::TestKind::kcm:
            outcome = kcm::kcm_test(config.model, data, config.kernel, bootstrap_size, alpha,
                                    seed, threads);
            break;
        case kcm::TestKind::icm:
            outcome = kcm::icm_test(config.model, data, bootstrap_size, alpha, seed, threads);
            break;
        case kcm::TestKind::smooth:
            outcome = kcm::smooth_test(config.model, data, bootstrap_size, alpha, seed, threads);
            break;
    }
    std::cout << kcm::outcome_to_json(outcome).dump(2) << '\n';
    return 0;
}

int run_estimate(const std::string& data_path, const std::string& model_path,
                 const std::vector<double>& lower, const std::vector<double>& upper) {
    const kcm::ModelConfig config = kcm::model_config_from_file(model_path);
    const kcm::CsvTable table = kcm::read_csv_file(data_path);
    const kcm::Dataset data = kcm::dataset_for_model(config.model, table);

    kcm::FitResult fit;
    if (config.model.linear_in_theta()) {
        fit = kcm::mmmr_fit(config.model, data, config.kernel);
    } else {
        if (lower.empty() || upper.empty())
            throw kcm::InputError(
                "estimate: this model kind needs --lower and --upper search bounds");
        const auto lo = Eigen::Map<const kcm::Vector>(lower.data(),
                                                      static_cast<Eigen::Index>(lower.size()));
        const auto hi = Eigen::Map<const kcm::Vector>(upper.data(),
                                                      static_cast<Eigen::Index>(upper.size()));
        fit = kcm::mmmr_fit_numeric(config.model, data, config.kernel, lo, hi);
    }

    nlohmann::ordered_json j;
    j["theta_hat"] = std::vector<double>(fit.theta_hat.data(),
                                         fit.theta_hat.data() + fit.theta_hat.size());
    j["objective"] = fit.objective;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_iv(const std::string& data_path, double lambda, const std::string& query_path,
           const std::string& pred_path) {
    const kcm::CsvTable table = kcm::read_csv_file(data_path);
    const kcm::IVData iv = kcm::iv_data_from_csv(table);

    kcm::IVProblem problem;
    problem.treatments = iv.treatments;
    problem.outcomes = iv.outcomes;
    problem.instruments = iv.instruments;
    problem.lambda = lambda;
    const kcm::IVSolution sol = kcm::mmr_iv_solve(problem);

    const kcm::Vector fitted = sol.predict(problem.treatments);
    const double train_mse = (problem.outcomes - fitted).squaredNorm() /
                             static_cast<double>(problem.outcomes.size());

    nlohmann::ordered_json j;
    j["alpha"] = std::vector<double>(sol.alpha.data(), sol.alpha.data() + sol.alpha.size());
    j["train_mse"] = train_mse;
    std::cout << j.dump(2) << '\n';

    if (!query_path.empty()) {
        const kcm::CsvTable query = kcm::read_csv_file(query_path);
        kcm::require(query.values.cols() == problem.treatments.cols(),
                     "iv: query columns must match the treatment dimension");
        const kcm::Vector ghat = sol.predict(query.values);
        kcm::Matrix out(query.values.rows(), query.values.cols() + 1);
        out.leftCols(query.values.cols()) = query.values;
        out.col(query.values.cols()) = ghat;
        std::vector<std::string> cols = query.columns;
        cols.push_back("ghat");
        emit(pred_path, [&](std::ostream& os) { kcm::write_csv(os, cols, out); });
    }
    return 0;
}

int run_experiment(const std::string& config_path, const std::string& out_path, int threads,
                   bool type1_only) {
    const kcm::ExperimentConfig config = kcm::experiment_config_from_file(config_path);
    const std::vector<kcm::CellResult> results =
        type1_only ? kcm::run_type1(config, threads) : kcm::run_power(config, threads);
    emit(out_path, [&](std::ostream& out) { kcm::write_results_csv(out, results); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel conditional moment specification tests"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --threads appear after the subcommand too
    int threads = 1;
    app.add_option("--threads", threads, "Worker threads (results do not depend on this)");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a dataset CSV from a built-in DGP");
    std::string gen_dgp = "reg_hom", gen_out;
    int gen_n = 100, gen_d = 5;
    std::uint64_t gen_seed = 0;
    gen->add_option("--dgp", gen_dgp, "reg_hom | reg_het | simeq")->required();
    gen->add_option("--n", gen_n, "Sample size")->required();
    gen->add_option("--d", gen_d, "Covariate dimension (regression DGPs)");
    gen->add_option("--seed", gen_seed, "RNG seed")->required();
    gen->add_option("--out", gen_out, "Output CSV (default: stdout)");

    // test
    auto* test = app.add_subcommand("test", "Run a specification test, JSON result on stdout");
    std::string test_data, test_model, test_kind = "kcm";
    int test_B = 1000;
    double test_alpha = 0.05;
    std::uint64_t test_seed = 0;
    test->add_option("--data", test_data, "Dataset CSV")->required();
    test->add_option("--model", test_model, "Model config JSON")->required();
    test->add_option("--test", test_kind, "kcm | icm | smooth");
    test->add_option("--B", test_B, "Bootstrap draws");
    test->add_option("--alpha", test_alpha, "Significance level");
    test->add_option("--seed", test_seed, "RNG seed")->required();

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Minimum-MMR parameter estimate");
    std::string est_data, est_model;
    std::vector<double> est_lower, est_upper;
    estimate->add_option("--data", est_data, "Dataset CSV")->required();
    estimate->add_option("--model", est_model, "Model config JSON")->required();
    estimate->add_option("--lower", est_lower, "Search box lower corner (numeric path)");
    estimate->add_option("--upper", est_upper, "Search box upper corner (numeric path)");

    // iv
    auto* iv = app.add_subcommand("iv", "Kernel ridge IV regression");
    std::string iv_data, iv_query, iv_pred;
    double iv_lambda = 1e-3;
    iv->add_option("--data", iv_data, "CSV with y, x*, z* columns")->required();
    iv->add_option("--lambda", iv_lambda, "Ridge penalty")->required();
    iv->add_option("--query", iv_query, "Optional CSV of treatment points to predict at");
    iv->add_option("--pred-out", iv_pred, "Predictions CSV (default: stdout)");

    // power / type1
    auto* power = app.add_subcommand("power", "Monte-Carlo power experiment");
    auto* type1 = app.add_subcommand("type1", "Monte-Carlo Type-I experiment (delta = 0)");
    std::string power_config, power_out, type1_config, type1_out;
    power->add_option("--config", power_config, "Experiment config JSON")->required();
    power->add_option("--out", power_out, "Results CSV (default: stdout)");
    type1->add_option("--config", type1_config, "Experiment config JSON")->required();
    type1->add_option("--out", type1_out, "Results CSV (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_dgp, gen_n, gen_d, gen_seed, gen_out);
        if (test->parsed())
            return run_test(test_data, test_model, test_kind, test_B, test_alpha, test_seed,
                            threads);
        if (estimate->parsed()) return run_estimate(est_data, est_model, est_lower, est_upper);
        if (iv->parsed()) return run_iv(iv_data, iv_lambda, iv_query, iv_pred);
        if (power->parsed()) return run_experiment(power_config, power_out, threads, false);
        if (type1->parsed()) return run_experiment(type1_config, type1_out, threads, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
