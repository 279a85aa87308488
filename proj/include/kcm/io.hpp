#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kcm/cm_tests.hpp"
#include "kcm/common.hpp"
#include "kcm/harness.hpp"
#include "kcm/kernels.hpp"
#include "kcm/models.hpp"

namespace kcm {

/// Numeric CSV with a header row, one observation per line.
struct CsvTable {
    std::vector<std::string> columns;
    Matrix values;

    int column(const std::string& name) const;      // -1 when absent
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes with full double precision so generated data round-trips.
void write_csv(std::ostream& out, const std::vector<std::string>& columns, const Matrix& values);

/// Column names used when emitting a generated dataset.
std::vector<std::string> dataset_columns(DgpKind dgp, int d);

/// Maps named CSV columns onto the positional layout a model kind expects:
///   regression/quantile: column "y" plus regressors (everything else, or
///                        the x*-prefixed columns when present)
///   iv_regression:       "y", x*-prefixed treatments, z*-prefixed
///                        instruments; conditioning = instruments
///   simeq:               columns Q, P, R, W; conditioning = (R, W)
Dataset dataset_for_model(const ResidualModel& model, const CsvTable& table);

/// y / x* / z* columns of an instrumental-variable dataset.
struct IVData {
    Matrix treatments;
    Vector outcomes;
    Matrix instruments;
};
IVData iv_data_from_csv(const CsvTable& table);

/// {"family": "rbf", "bandwidth": "median"} and friends.
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

struct ModelConfig {
    ResidualModel model;
    KernelSpec kernel = KernelSpec::rbf_median();
};

/// {"kind": ..., "theta": [...], "tau": ..., "kernel": {...}}; the kernel
/// block is optional and defaults to rbf with the median bandwidth.
ModelConfig model_config_from_json(const nlohmann::json& j);
ModelConfig model_config_from_file(const std::string& path);

/// Mirrors ExperimentConfig field for field; absent fields keep defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig experiment_config_from_file(const std::string& path);

/// TestOutcome as JSON with fields in declaration order.
nlohmann::ordered_json outcome_to_json(const TestOutcome& outcome);

}  // namespace kcm
