#include "kcm/mmr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kcm {

HMatrix h_matrix_from(const Matrix& residual_rows, const Matrix& kernel_gram) {
    const Eigen::Index n = residual_rows.rows();
    require(kernel_gram.rows() == n && kernel_gram.cols() == n,
            "h_matrix: residual/gram shape mismatch");
    Matrix H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = residual_rows.row(i).dot(residual_rows.row(j)) * kernel_gram(i, j);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return HMatrix{std::move(H)};
}

HMatrix h_matrix(const ResidualModel& model, const Dataset& data, const KernelSpec& spec) {
    const Matrix R = residuals(model, data);
    const Matrix K = gram(resolve_bandwidth(spec, data.x()), data.x());
    return h_matrix_from(R, K);
}

MMRStat mmr_u(const HMatrix& h) {
    const int n = h.n();
    require(n >= 2, "mmr_u: need n >= 2");
    const double off = h.values.sum() - h.values.trace();
    return MMRStat{off / (static_cast<double>(n) * (n - 1)), StatKind::u_stat, n};
}

MMRStat mmr_v(const HMatrix& h) {
    const int n = h.n();
    require(n >= 1, "mmr_v: need n >= 1");
    return MMRStat{h.values.sum() / (static_cast<double>(n) * n), StatKind::v_stat, n};
}

Vector cmme_eval(const ResidualModel& model, const Dataset& data, const KernelSpec& spec,
                 const Vector& x_query) {
    const Matrix R = residuals(model, data);
    const Matrix X = data.x();
    const KernelSpec rs = resolve_bandwidth(spec, X);
    require(x_query.size() == X.cols(), "cmme_eval: query dimension mismatch");
    Vector out = Vector::Zero(model.q());
    for (int i = 0; i < data.n(); ++i) {
        const double k = eval_kernel(rs, Vector(X.row(i).transpose()), x_query);
        out += k * R.row(i).transpose();
    }
    return out / static_cast<double>(data.n());
}

double cmmd_v(const ResidualModel& base, const Vector& theta1, const Vector& theta2,
              const Dataset& data, const KernelSpec& spec) {
    const Matrix R1 = residuals(base.with_theta(theta1), data);
    const Matrix R2 = residuals(base.with_theta(theta2), data);
    const Matrix K = gram(resolve_bandwidth(spec, data.x()), data.x());
    return mmr_v(h_matrix_from(R1 - R2, K)).value;
}

double spectral_mmr_estimate(const ResidualModel& model, const Dataset& data, double sigma,
                             int n_features, RngStream rng) {
    require(sigma > 0.0, "spectral_mmr_estimate: sigma must be positive");
    require(n_features >= 1, "spectral_mmr_estimate: need n_features >= 1");

    const Matrix R = residuals(model, data);
    const Matrix X = data.x();
    const int n = data.n();
    const int d = data.d();
    const int q = model.q();

    // Fixed-size blocks accumulated in block order keep the reduction
    // deterministic regardless of how the feature loop is scheduled.
    constexpr int kBlock = 1024;
    const int n_blocks = (n_features + kBlock - 1) / kBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);

    Vector omega(d), phase(n), amp_cos(q), amp_sin(q);
    for (int b = 0; b < n_blocks; ++b) {
        double acc = 0.0;
        const int lo = b * kBlock;
        const int hi = std::min(n_features, lo + kBlock);
        RngStream block_rng = rng.child(static_cast<std::uint64_t>(b));
        for (int m = lo; m < hi; ++m) {
            for (int j = 0; j < d; ++j) omega(j) = block_rng.normal() / sigma;
            phase.noalias() = X * omega;
            amp_cos.setZero();
            amp_sin.setZero();
            for (int i = 0; i < n; ++i) {
                amp_cos += std::cos(phase(i)) * R.row(i).transpose();
                amp_sin += std::sin(phase(i)) * R.row(i).transpose();
            }
            amp_cos /= static_cast<double>(n);
            amp_sin /= static_cast<double>(n);
            acc += amp_cos.squaredNorm() + amp_sin.squaredNorm();
        }
        block_sum[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double s : block_sum) total += s;
    return total / static_cast<double>(n_features);
}

double spectral_mmr_estimate(const ResidualModel& model, const Dataset& data,
                             const KernelSpec& spec, int n_features, RngStream rng) {
    if (spec.family != KernelFamily::rbf)
        throw UnsupportedKernelError(
            "spectral_mmr_estimate: only the rbf kernel has the Gaussian spectral measure");
    const KernelSpec rs = resolve_bandwidth(spec, data.x());
    return spectral_mmr_estimate(model, data, rs.bandwidth, n_features, rng);
}

std::pair<double, double> mercer_finite_check(const ResidualModel& model, const Dataset& data,
                                              const KernelSpec& spec, int dim_features) {
    if (spec.family != KernelFamily::linear)
        throw UnsupportedKernelError("mercer_finite_check: requires the linear kernel");
    return mercer_finite_check(model, data, dim_features);
}

std::pair<double, double> mercer_finite_check(const ResidualModel& model, const Dataset& data,
                                              int dim_features) {
    require(dim_features == data.d(),
            "mercer_finite_check: dim_features must equal the conditioning dimension");
    const Matrix R = residuals(model, data);
    const Matrix X = data.x();
    const int n = data.n();

    const double lhs = mmr_v(h_matrix_from(R, gram(KernelSpec::linear(), X))).value;

    double rhs = 0.0;
    for (int j = 0; j < data.d(); ++j) {
        const Vector moment = R.transpose() * X.col(j) / static_cast<double>(n);
        rhs += moment.squaredNorm();
    }
    return {lhs, rhs};
}

}  // namespace kcm
