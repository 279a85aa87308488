#pragma once

#include "kcm/common.hpp"
#include "kcm/kernels.hpp"
#include "kcm/mmr.hpp"
#include "kcm/models.hpp"

namespace kcm {

/// Instrumental-variable regression instance: outcomes y, treatments X,
/// instruments Z, a kernel on each, and a ridge penalty lambda > 0.
struct IVProblem {
    Matrix treatments;
    Vector outcomes;
    Matrix instruments;
    KernelSpec instrument_kernel = KernelSpec::rbf_median();  // builds K
    KernelSpec treatment_kernel = KernelSpec::rbf_median();   // builds L
    double lambda = 1e-3;
};

/// Fitted coefficients plus what the representer-form predictor needs.
struct IVSolution {
    Vector alpha;
    Matrix train_points;
    KernelSpec treatment_kernel;  // resolved
    bool jitter_applied = false;

    double predict(const Vector& x) const;
    Vector predict(const Matrix& query_points) const;
};

/// The U-statistic objective at theta: exactly the test estimator viewed as a
/// function of the parameter. A median bandwidth is resolved once against the
/// conditioning block.
double mmmr_objective(const Vector& theta, const ResidualModel& base, const Dataset& data,
                      const KernelSpec& spec);

/// Coefficients of the exact quadratic theta' A theta - 2 b' theta + c equal
/// to mmmr_objective for residuals linear in theta.
struct QuadraticForm {
    Matrix A;
    Vector b;
    double c = 0.0;
    double value(const Vector& theta) const;
};

QuadraticForm mmmr_quadratic(const ResidualModel& base, const Dataset& data,
                             const KernelSpec& spec);

struct FitResult {
    Vector theta_hat;
    double objective = 0.0;
};

/// Closed-form minimizer of the quadratic objective for residuals linear in
/// theta (regression, iv_regression, simeq). A is symmetrized before the
/// solve; a reciprocal condition number below 1e-12 raises IllPosedError.
FitResult mmmr_fit(const ResidualModel& base, const Dataset& data, const KernelSpec& spec);

/// Heuristic fallback for non-linear residuals: coordinate-wise
/// golden-section sweeps inside [lower, upper], iterated until the parameter
/// moves less than 1e-8. No consistency claims attach to this path.
FitResult mmmr_fit_numeric(const ResidualModel& base, const Dataset& data, const KernelSpec& spec,
                           const Vector& lower, const Vector& upper);

/// Solves (L K L + n^2 lambda L) alpha = L K y by a symmetric factorization
/// (never an explicit inverse) and checks the stationarity residual to
/// 1e-8 relative. A failed check adds jitter 1e-10 tr(L)/n to L's diagonal
/// once and retries; a second failure raises RegularizationError.
IVSolution mmr_iv_solve(const IVProblem& problem);

}  // namespace kcm
