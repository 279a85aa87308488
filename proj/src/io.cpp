#include "kcm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kcm {

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

bool CsvTable::has_column(const std::string& name) const { return column(name) >= 0; }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back("");
    return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty input");
    CsvTable table;
    table.columns = split_csv_line(line);
    require(!table.columns.empty(), "csv: empty header");

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != table.columns.size())
            throw InputError("csv: line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(table.columns.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) {
            try {
                std::size_t used = 0;
                const double v = std::stod(f, &used);
                if (used != f.size()) throw std::invalid_argument(f);
                row.push_back(v);
            } catch (const std::exception&) {
                throw InputError("csv: line " + std::to_string(line_no) +
                                 ": cannot parse '" + f + "' as a number");
            }
        }
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), "csv: no data rows");
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_csv(in);
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns, const Matrix& values) {
    require(static_cast<Eigen::Index>(columns.size()) == values.cols(),
            "write_csv: header/data width mismatch");
    for (std::size_t j = 0; j < columns.size(); ++j)
        out << (j ? "," : "") << columns[j];
    out << '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

std::vector<std::string> dataset_columns(DgpKind dgp, int d) {
    if (dgp == DgpKind::simeq) return {"Q", "P", "R", "W"};
    std::vector<std::string> cols = {"y"};
    for (int j = 1; j <= d; ++j) cols.push_back("x" + std::to_string(j));
    return cols;
}

namespace {

std::vector<int> prefixed_columns(const CsvTable& table, char prefix) {
    std::vector<int> out;
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (!table.columns[j].empty() && table.columns[j][0] == prefix)
            out.push_back(static_cast<int>(j));
    return out;
}

}  // namespace

Dataset dataset_for_model(const ResidualModel& model, const CsvTable& table) {
    Dataset data;
    switch (model.kind) {
        case ModelKind::regression:
        case ModelKind::quantile: {
            const int y = table.column("y");
            require(y >= 0, "dataset: regression CSV needs a 'y' column");
            std::vector<int> xs = prefixed_columns(table, 'x');
            if (xs.empty()) {
                for (std::size_t j = 0; j < table.columns.size(); ++j)
                    if (static_cast<int>(j) != y) xs.push_back(static_cast<int>(j));
            }
            require(!xs.empty(), "dataset: no regressor columns");
            data.Z.resize(table.values.rows(), 1 + static_cast<Eigen::Index>(xs.size()));
            data.Z.col(0) = table.values.col(y);
            for (std::size_t j = 0; j < xs.size(); ++j)
                data.Z.col(1 + static_cast<Eigen::Index>(j)) = table.values.col(xs[j]);
            data.x_index.resize(xs.size());
            std::iota(data.x_index.begin(), data.x_index.end(), 1);
            break;
        }
        case ModelKind::iv_regression: {
            const IVData iv = iv_data_from_csv(table);
            const auto r = iv.treatments.cols();
            const auto k = iv.instruments.cols();
            data.Z.resize(iv.outcomes.size(), 1 + r + k);
            data.Z.col(0) = iv.outcomes;
            data.Z.middleCols(1, r) = iv.treatments;
            data.Z.middleCols(1 + r, k) = iv.instruments;
            for (int j = 0; j < k; ++j) data.x_index.push_back(1 + static_cast<int>(r) + j);
            break;
        }
        case ModelKind::simeq: {
            for (const char* name : {"Q", "P", "R", "W"})
                require(table.has_column(name), std::string("dataset: simeq CSV needs column ") + name);
            data.Z.resize(table.values.rows(), 4);
            data.Z.col(0) = table.values.col(table.column("Q"));
            data.Z.col(1) = table.values.col(table.column("P"));
            data.Z.col(2) = table.values.col(table.column("R"));
            data.Z.col(3) = table.values.col(table.column("W"));
            data.x_index = {2, 3};
            break;
        }
    }
    data.validate();
    return data;
}

IVData iv_data_from_csv(const CsvTable& table) {
    const int y = table.column("y");
    require(y >= 0, "iv dataset: needs a 'y' column");
    const std::vector<int> xs = prefixed_columns(table, 'x');
    const std::vector<int> zs = prefixed_columns(table, 'z');
    require(!xs.empty(), "iv dataset: needs x* treatment columns");
    require(!zs.empty(), "iv dataset: needs z* instrument columns");
    IVData out;
    out.outcomes = table.values.col(y);
    out.treatments.resize(table.values.rows(), static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j)
        out.treatments.col(static_cast<Eigen::Index>(j)) = table.values.col(xs[j]);
    out.instruments.resize(table.values.rows(), static_cast<Eigen::Index>(zs.size()));
    for (std::size_t j = 0; j < zs.size(); ++j)
        out.instruments.col(static_cast<Eigen::Index>(j)) = table.values.col(zs[j]);
    return out;
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
    KernelSpec spec;
    spec.family = kernel_family_from_string(j.value("family", std::string("rbf")));
    if (j.contains("bandwidth")) {
        const auto& b = j.at("bandwidth");
        if (b.is_string()) {
            require(b.get<std::string>() == "median",
                    "kernel config: bandwidth must be a number or \"median\"");
            spec.median_bandwidth = true;
        } else {
            spec.bandwidth = b.get<double>();
        }
    } else if (spec.family == KernelFamily::rbf || spec.family == KernelFamily::laplacian) {
        spec.median_bandwidth = true;
    }
    spec.c = j.value("c", spec.c);
    spec.gamma = j.value("gamma", spec.gamma);
    spec.degree = j.value("degree", spec.degree);
    spec.offset = j.value("offset", spec.offset);
    spec.validate();
    return spec;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig config;
    config.model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    const auto theta = j.at("theta").get<std::vector<double>>();
    config.model.theta = Eigen::Map<const Vector>(theta.data(),
                                                  static_cast<Eigen::Index>(theta.size()));
    config.model.tau = j.value("tau", 0.5);
    if (j.contains("kernel")) config.kernel = kernel_spec_from_json(j.at("kernel"));
    return config;
}

ModelConfig model_config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return model_config_from_json(j);
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    if (j.contains("dgp")) config.dgp = dgp_kind_from_string(j.at("dgp").get<std::string>());
    if (j.contains("n_grid")) config.n_grid = j.at("n_grid").get<std::vector<int>>();
    if (j.contains("delta_grid"))
        config.delta_grid = j.at("delta_grid").get<std::vector<double>>();
    config.trials = j.value("trials", config.trials);
    config.bootstrap_size = j.value("B", config.bootstrap_size);
    config.alpha = j.value("alpha", config.alpha);
    if (j.contains("tests")) {
        config.tests.clear();
        for (const auto& t : j.at("tests"))
            config.tests.push_back(test_kind_from_string(t.get<std::string>()));
    }
    config.master_seed = j.value("master_seed", config.master_seed);
    config.d = j.value("d", config.d);
    config.validate();
    return config;
}

ExperimentConfig experiment_config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return experiment_config_from_json(j);
}

nlohmann::ordered_json outcome_to_json(const TestOutcome& outcome) {
    nlohmann::ordered_json j;
    j["statistic"] = outcome.statistic;
    j["critical_value"] = outcome.critical_value;
    j["p_value"] = outcome.p_value;
    j["reject"] = outcome.reject;
    j["bootstrap_draws"] = outcome.bootstrap_draws;
    j["alpha"] = outcome.alpha;
    j["seed"] = outcome.seed;
    return j;
}

}  // namespace kcm
