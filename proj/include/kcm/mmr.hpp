#pragma once

#include <utility>

#include "kcm/common.hpp"
#include "kcm/kernels.hpp"
#include "kcm/models.hpp"
#include "kcm/rng.hpp"

namespace kcm {

/// H_ij = psi(z_i;theta) . psi(z_j;theta) * k(x_i, x_j). Exactly symmetric by
/// construction; positive semidefinite (up to rounding) whenever k is, being
/// the Schur product of the residual outer-product matrix with the Gram
/// matrix. Stored dense: ~8 n^2 bytes.
struct HMatrix {
    Matrix values;
    int n() const { return static_cast<int>(values.rows()); }
};

enum class StatKind { u_stat, v_stat };

struct MMRStat {
    double value = 0.0;
    StatKind kind = StatKind::u_stat;
    int n = 0;
};

HMatrix h_matrix(const ResidualModel& model, const Dataset& data, const KernelSpec& spec);
HMatrix h_matrix_from(const Matrix& residual_rows, const Matrix& kernel_gram);

/// Off-diagonal mean: sum_{i != j} H_ij / (n (n-1)). May be negative.
MMRStat mmr_u(const HMatrix& h);

/// Full mean: sum_{i,j} H_ij / n^2. A squared norm, so nonnegative up to
/// rounding; values are reported as computed, never clamped.
MMRStat mmr_v(const HMatrix& h);

/// Empirical conditional moment embedding evaluated at a query point:
/// (1/n) sum_i psi(z_i;theta) k(x_i, x_query). Large entries flag structural
/// instability near x_query.
Vector cmme_eval(const ResidualModel& model, const Dataset& data, const KernelSpec& spec,
                 const Vector& x_query);

/// Squared discrepancy between two parameterizations of the same residual
/// family: the V-statistic of the kernel matrix built from the differential
/// residuals psi(z;theta1) - psi(z;theta2). base supplies kind and tau.
double cmmd_v(const ResidualModel& base, const Vector& theta1, const Vector& theta2,
              const Dataset& data, const KernelSpec& spec);

/// Monte-Carlo estimate of the V-statistic through random Fourier features of
/// the rbf kernel: omega_m ~ N(0, sigma^-2 I),
///   (1/M) sum_m [ |(1/n) sum_i psi_i cos(omega_m . x_i)|^2
///               + |(1/n) sum_i psi_i sin(omega_m . x_i)|^2 ].
/// Converges to mmr_v of the rbf H matrix as M grows.
double spectral_mmr_estimate(const ResidualModel& model, const Dataset& data, double sigma,
                             int n_features, RngStream rng);

/// Same, taking the kernel whose spectral measure is sampled. Only the rbf
/// family has the Gaussian spectral measure used here; anything else throws
/// UnsupportedKernelError.
double spectral_mmr_estimate(const ResidualModel& model, const Dataset& data,
                             const KernelSpec& spec, int n_features, RngStream rng);

/// The finite Mercer expansion of the linear kernel k(x,y) = x.y makes the
/// V-statistic a plain sum of d weighted moment restrictions. Returns
/// (lhs, rhs) with lhs = mmr_v under the linear kernel and
/// rhs = sum_j |(1/n) sum_i psi_i x_ij|^2; the two agree to rounding.
/// dim_features must equal the conditioning dimension d.
std::pair<double, double> mercer_finite_check(const ResidualModel& model, const Dataset& data,
                                              int dim_features);

/// Same, validating that spec names the linear kernel (the only family with
/// the finite expansion this check relies on).
std::pair<double, double> mercer_finite_check(const ResidualModel& model, const Dataset& data,
                                              const KernelSpec& spec, int dim_features);

}  // namespace kcm
