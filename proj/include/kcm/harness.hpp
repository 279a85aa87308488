#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kcm/common.hpp"
#include "kcm/dgp.hpp"

namespace kcm {

enum class DgpKind { reg_hom, reg_het, simeq };
enum class TestKind { kcm, icm, smooth };

std::string to_string(DgpKind kind);
std::string to_string(TestKind kind);
DgpKind dgp_kind_from_string(const std::string& name);
TestKind test_kind_from_string(const std::string& name);

/// Monte-Carlo experiment: for every (test, n, delta) cell, `trials`
/// replicates each draw fresh data, perturb the true parameter by
/// N(0, delta^2 I), and run the test at level alpha with `bootstrap_size`
/// draws. Defaults mirror the reference grids.
struct ExperimentConfig {
    DgpKind dgp = DgpKind::reg_hom;
    std::vector<int> n_grid = {100, 200, 400, 600, 800, 1000};
    std::vector<double> delta_grid = {1e-4, 2e-3, 4e-3, 6e-3, 8e-3, 1e-2};
    int trials = 300;
    int bootstrap_size = 1000;
    double alpha = 0.05;
    std::vector<TestKind> tests = {TestKind::kcm, TestKind::icm, TestKind::smooth};
    std::uint64_t master_seed = 0;
    int d = 5;  // regression DGPs only

    void validate() const;
};

struct CellResult {
    TestKind test = TestKind::kcm;
    DgpKind dgp = DgpKind::reg_hom;
    int n = 0;
    double delta = 0.0;
    int trials = 0;
    int rejections = 0;
    double rate = 0.0;
    double se = 0.0;
    std::uint64_t seed = 0;
};

/// Seed of a cell's trial streams. Derived from the cell's content (not its
/// grid position), so editing one grid entry never changes another cell's
/// draws.
std::uint64_t cell_seed(const ExperimentConfig& config, TestKind test, int n, double delta);

/// Rejection rates over the full (test, n, delta) grid. Trials run in
/// parallel; trial t of a cell uses the stream derived from (cell seed, t),
/// so the table is byte-identical for every thread count.
std::vector<CellResult> run_power(const ExperimentConfig& config, int n_threads = 1);

/// run_power with delta_grid collapsed to {0}: the null hypothesis holds and
/// the rates are Type-I errors.
std::vector<CellResult> run_type1(ExperimentConfig config, int n_threads = 1);

/// Long-form CSV, header
///   test,dgp,n,delta,trials,rejections,rate,se,seed
/// LF line endings, floats with 6 significant digits.
void write_results_csv(std::ostream& out, const std::vector<CellResult>& results);

}  // namespace kcm
