#include "kcm/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kcm/cm_tests.hpp"

namespace kcm {

std::string to_string(DgpKind kind) {
    switch (kind) {
        case DgpKind::reg_hom: return "reg_hom";
        case DgpKind::reg_het: return "reg_het";
        case DgpKind::simeq: return "simeq";
    }
    return "?";
}

std::string to_string(TestKind kind) {
    switch (kind) {
        case TestKind::kcm: return "kcm";
        case TestKind::icm: return "icm";
        case TestKind::smooth: return "smooth";
    }
    return "?";
}

DgpKind dgp_kind_from_string(const std::string& name) {
    if (name == "reg_hom") return DgpKind::reg_hom;
    if (name == "reg_het") return DgpKind::reg_het;
    if (name == "simeq") return DgpKind::simeq;
    throw InputError("unknown dgp: " + name);
}

TestKind test_kind_from_string(const std::string& name) {
    if (name == "kcm") return TestKind::kcm;
    if (name == "icm") return TestKind::icm;
    if (name == "smooth") return TestKind::smooth;
    throw InputError("unknown test: " + name);
}

void ExperimentConfig::validate() const {
    require(!n_grid.empty(), "experiment: n_grid must be nonempty");
    require(!delta_grid.empty(), "experiment: delta_grid must be nonempty");
    require(!tests.empty(), "experiment: tests must be nonempty");
    require(trials >= 1, "experiment: trials must be >= 1");
    require(bootstrap_size >= 1, "experiment: B must be >= 1");
    require(alpha > 0.0 && alpha < 1.0, "experiment: alpha must lie in (0,1)");
    require(d >= 1, "experiment: d must be >= 1");
    for (int n : n_grid) require(n >= 2, "experiment: every n must be >= 2");
    for (double delta : delta_grid) require(delta >= 0.0, "experiment: delta must be >= 0");
}

std::uint64_t cell_seed(const ExperimentConfig& config, TestKind test, int n, double delta) {
    std::uint64_t acc = splitmix64(config.master_seed);
    auto fold = [&acc](std::uint64_t v) { acc = splitmix64(acc ^ splitmix64(v)); };
    fold(static_cast<std::uint64_t>(test) + 1);
    fold(static_cast<std::uint64_t>(config.dgp) + 101);
    fold(static_cast<std::uint64_t>(n));
    fold(std::bit_cast<std::uint64_t>(delta));
    fold(static_cast<std::uint64_t>(config.d));
    return acc;
}

namespace {

bool run_trial(const ExperimentConfig& config, TestKind test, int n, double delta,
               RngStream trial) {
    RngStream data_stream = trial.child(1);
    RngStream theta_stream = trial.child(2);
    const std::uint64_t test_seed = trial.child(3).seed();

    Dataset data;
    Vector theta0;
    ModelKind kind = ModelKind::regression;
    switch (config.dgp) {
        case DgpKind::reg_hom:
            data = gen_reg(n, config.d, RegVariant::hom, data_stream);
            theta0 = reg_true_theta(config.d);
            break;
        case DgpKind::reg_het:
            data = gen_reg(n, config.d, RegVariant::het, data_stream);
            theta0 = reg_true_theta(config.d);
            break;
        case DgpKind::simeq:
            data = gen_simeq(n, data_stream);
            theta0 = simeq_true_theta(1.0, -1.0, 1.0, 1.0);
            kind = ModelKind::simeq;
            break;
    }
    ResidualModel model;
    model.kind = kind;
    model.theta = perturb_theta(theta0, delta, theta_stream);

    TestOutcome outcome;
    switch (test) {
        case TestKind::kcm:
            outcome = kcm_test(model, data, KernelSpec::rbf_median(), config.bootstrap_size,
                               config.alpha, test_seed);
            break;
        case TestKind::icm:
            outcome = icm_test(model, data, config.bootstrap_size, config.alpha, test_seed);
            break;
        case TestKind::smooth:
            outcome = smooth_test(model, data, config.bootstrap_size, config.alpha, test_seed);
            break;
    }
    return outcome.reject;
}

}  // namespace

std::vector<CellResult> run_power(const ExperimentConfig& config, int n_threads) {
    config.validate();
    std::vector<CellResult> results;
    for (TestKind test : config.tests) {
        for (int n : config.n_grid) {
            for (double delta : config.delta_grid) {
                const std::uint64_t seed = cell_seed(config, test, n, delta);
                std::vector<std::uint8_t> rejected(static_cast<std::size_t>(config.trials), 0);
                parallel_for(config.trials, n_threads, [&](std::int64_t t) {
                    const RngStream trial = RngStream(seed).child(static_cast<std::uint64_t>(t));
                    rejected[static_cast<std::size_t>(t)] =
                        run_trial(config, test, n, delta, trial) ? 1 : 0;
                });
                CellResult cell;
                cell.test = test;
                cell.dgp = config.dgp;
                cell.n = n;
                cell.delta = delta;
                cell.trials = config.trials;
                for (std::uint8_t r : rejected) cell.rejections += r;
                cell.rate = static_cast<double>(cell.rejections) / config.trials;
                cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) / config.trials);
                cell.seed = seed;
                results.push_back(cell);
            }
        }
    }
    return results;
}

std::vector<CellResult> run_type1(ExperimentConfig config, int n_threads) {
    config.delta_grid = {0.0};
    return run_power(config, n_threads);
}

namespace {

std::string g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<CellResult>& results) {
    out << "test,dgp,n,delta,trials,rejections,rate,se,seed\n";
    for (const CellResult& cell : results) {
        out << to_string(cell.test) << ',' << to_string(cell.dgp) << ',' << cell.n << ','
            << g6(cell.delta) << ',' << cell.trials << ',' << cell.rejections << ','
            << g6(cell.rate) << ',' << g6(cell.se) << ',' << cell.seed << '\n';
    }
}

}  // namespace kcm
