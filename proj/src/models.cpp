#include "kcm/models.hpp"

#include <algorithm>
#include <set>

namespace kcm {

Matrix Dataset::x() const {
    Matrix out(n(), d());
    for (int j = 0; j < d(); ++j) out.col(j) = Z.col(x_index[static_cast<std::size_t>(j)]);
    return out;
}

void Dataset::validate() const {
    require(Z.rows() >= 1, "dataset: empty");
    require(!x_index.empty(), "dataset: x_index must select at least one column");
    std::set<int> seen;
    for (int idx : x_index) {
        require(idx >= 0 && idx < p(), "dataset: x_index out of range");
        require(seen.insert(idx).second, "dataset: x_index entries must be distinct");
    }
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::regression: return "regression";
        case ModelKind::quantile: return "quantile";
        case ModelKind::iv_regression: return "iv_regression";
        case ModelKind::simeq: return "simeq";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "regression") return ModelKind::regression;
    if (name == "quantile") return ModelKind::quantile;
    if (name == "iv_regression") return ModelKind::iv_regression;
    if (name == "simeq") return ModelKind::simeq;
    throw InputError("unknown model kind: " + name);
}

ResidualModel ResidualModel::with_theta(Vector t) const {
    ResidualModel out = *this;
    out.theta = std::move(t);
    return out;
}

namespace {

void check_theta(const ResidualModel& model, const Dataset& data) {
    const int r = static_cast<int>(model.theta.size());
    switch (model.kind) {
        case ModelKind::regression:
        case ModelKind::quantile:
            require(r >= 1 && r == data.p() - 1,
                    "residuals: theta dimension must match the regressor count");
            break;
        case ModelKind::iv_regression:
            require(r >= 1 && r <= data.p() - 2,
                    "residuals: iv_regression needs columns (y, x_1..x_r, instruments)");
            break;
        case ModelKind::simeq:
            require(r == 4, "residuals: simeq theta is (a_d, b_d, a_s, b_s)");
            require(data.p() == 4, "residuals: simeq data is (Q, P, R, W)");
            break;
    }
    if (model.kind == ModelKind::quantile)
        require(model.tau > 0.0 && model.tau < 1.0, "residuals: tau must lie in (0,1)");
}

}  // namespace

Matrix residuals(const ResidualModel& model, const Dataset& data) {
    data.validate();
    check_theta(model, data);
    require_finite(data.Z, "residuals: data");
    require_finite(model.theta, "residuals: theta");

    const int n = data.n();
    const int r = static_cast<int>(model.theta.size());
    Matrix out(n, model.q());

    switch (model.kind) {
        case ModelKind::regression:
        case ModelKind::iv_regression: {
            out.col(0) = data.Z.col(0) - data.Z.middleCols(1, r) * model.theta;
            break;
        }
        case ModelKind::quantile: {
            const Vector fitted = data.Z.middleCols(1, r) * model.theta;
            for (int i = 0; i < n; ++i)
                out(i, 0) = (data.Z(i, 0) < fitted(i) ? 1.0 : 0.0) - model.tau;
            break;
        }
        case ModelKind::simeq: {
            const auto Q = data.Z.col(0);
            const auto P = data.Z.col(1);
            const auto R = data.Z.col(2);
            const auto W = data.Z.col(3);
            out.col(0) = Q - model.theta(0) * P - model.theta(1) * R;
            out.col(1) = Q - model.theta(2) * P - model.theta(3) * W;
            break;
        }
    }
    return out;
}

Vector perturb_theta(const Vector& theta0, double delta, RngStream& rng) {
    require(delta >= 0.0, "perturb_theta: delta must be >= 0");
    Vector out(theta0.size());
    for (Eigen::Index i = 0; i < theta0.size(); ++i)
        out(i) = theta0(i) + delta * rng.normal();
    return out;
}

}  // namespace kcm
