#include "kcm/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kcm {

Dataset gen_reg(int n, int d, RegVariant variant, RngStream& rng) {
    require(n >= 1 && d >= 1, "gen_reg: need n >= 1, d >= 1");
    Matrix Z(n, d + 1);
    for (int i = 0; i < n; ++i) {
        double xsum = 0.0, xnorm2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double xj = rng.normal();
            Z(i, 1 + j) = xj;
            xsum += xj;
            xnorm2 += xj * xj;
        }
        const double eps = rng.normal();
        const double e =
            variant == RegVariant::hom ? eps : eps * std::sqrt(0.1 + 0.1 * xnorm2);
        Z(i, 0) = xsum + e;  // beta_0 = 1
    }
    Dataset data;
    data.Z = std::move(Z);
    data.x_index.resize(static_cast<std::size_t>(d));
    std::iota(data.x_index.begin(), data.x_index.end(), 1);
    return data;
}

Dataset gen_simeq(int n, RngStream& rng) {
    require(n >= 1, "gen_simeq: need n >= 1");
    constexpr double l11 = 1.0, l12 = -1.0, l21 = 1.0, l22 = 1.0;
    const double s = std::sqrt(1e-3);
    const double rho = 1.0 / std::sqrt(2.0);
    const double rho_comp = std::sqrt(1.0 - rho * rho);
    Matrix Z(n, 4);
    for (int i = 0; i < n; ++i) {
        const double r = rng.normal();
        const double w = rng.normal();
        const double u1 = rng.normal();
        const double u2 = rng.normal();
        const double v1 = s * u1;
        const double v2 = s * (rho * u1 + rho_comp * u2);
        Z(i, 0) = l11 * r + l12 * w + v1;  // Q
        Z(i, 1) = l21 * r + l22 * w + v2;  // P
        Z(i, 2) = r;
        Z(i, 3) = w;
    }
    Dataset data;
    data.Z = std::move(Z);
    data.x_index = {2, 3};
    return data;
}

Vector reg_true_theta(int d) { return Vector::Ones(d); }

Eigen::Vector4d simeq_true_theta(double l11, double l12, double l21, double l22) {
    if (l21 == 0.0 || l22 == 0.0)
        throw SingularSystemError("simeq_true_theta: l21 and l22 must be nonzero");
    const double alpha_s = l11 / l21;
    const double beta_s = l12 - alpha_s * l22;
    const double alpha_d = alpha_s + beta_s / l22;
    const double beta_d = -l21 * beta_s / l22;

    // Back-substitute into the reduced-form map; a mismatch means the inputs
    // admit no structural solution of this form.
    const double gap = alpha_d - alpha_s;
    const double scale = std::max({1.0, std::abs(l11), std::abs(l12), std::abs(l21), std::abs(l22)});
    if (gap == 0.0)
        throw SingularSystemError("simeq_true_theta: demand and supply slopes coincide");
    const double r11 = -alpha_s * beta_d / gap - l11;
    const double r12 = alpha_s * beta_s / gap + beta_s - l12;
    const double r21 = -beta_d / gap - l21;
    const double r22 = beta_s / gap - l22;
    const double resid = std::max({std::abs(r11), std::abs(r12), std::abs(r21), std::abs(r22)});
    if (!(resid <= 1e-9 * scale))
        throw SingularSystemError("simeq_true_theta: inputs are inconsistent with the "
                                  "reduced-form system");
    return Eigen::Vector4d(alpha_d, beta_d, alpha_s, beta_s);
}

}  // namespace kcm
