#pragma once

#include <string>
#include <vector>

#include "kcm/common.hpp"
#include "kcm/rng.hpp"

namespace kcm {

/// Observations Z, one row per draw, plus the column indices of the
/// conditioning subvector X within Z.
struct Dataset {
    Matrix Z;
    std::vector<int> x_index;

    int n() const { return static_cast<int>(Z.rows()); }
    int p() const { return static_cast<int>(Z.cols()); }
    int d() const { return static_cast<int>(x_index.size()); }

    /// n x d block of the conditioning columns.
    Matrix x() const;

    void validate() const;
};

enum class ModelKind { regression, quantile, iv_regression, simeq };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Generalized residual psi(z; theta). Column layout of Z per kind:
///
///   regression, quantile: z = (y, x_1..x_r)            psi = y - theta.x
///                         (quantile: 1{y < theta.x} - tau)
///   iv_regression:        z = (y, x_1..x_r, w_1..w_k)  psi = y - theta.x,
///                         conditioning on the instrument columns w
///   simeq:                z = (Q, P, R, W), theta = (a_d, b_d, a_s, b_s),
///                         psi = (Q - a_d P - b_d R, Q - a_s P - b_s W)
struct ResidualModel {
    ModelKind kind = ModelKind::regression;
    Vector theta;
    double tau = 0.5;  // quantile level, quantile kind only

    int q() const { return kind == ModelKind::simeq ? 2 : 1; }
    bool linear_in_theta() const { return kind != ModelKind::quantile; }
    ResidualModel with_theta(Vector t) const;
};

/// n x q matrix whose row i is psi(z_i; theta).
Matrix residuals(const ResidualModel& model, const Dataset& data);

/// theta0 + gamma with gamma ~ N(0, delta^2 I). delta = 0 returns theta0
/// exactly; a fixed stream gives identical output on repeated calls.
Vector perturb_theta(const Vector& theta0, double delta, RngStream& rng);

}  // namespace kcm
