#include "kcm/estimation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace kcm {

double IVSolution::predict(const Vector& x) const {
    double out = 0.0;
    for (Eigen::Index i = 0; i < train_points.rows(); ++i)
        out += alpha(i) * eval_kernel(treatment_kernel, Vector(train_points.row(i).transpose()), x);
    return out;
}

Vector IVSolution::predict(const Matrix& query_points) const {
    require(query_points.cols() == train_points.cols(), "predict: query dimension mismatch");
    Vector out(query_points.rows());
    for (Eigen::Index i = 0; i < query_points.rows(); ++i)
        out(i) = predict(Vector(query_points.row(i).transpose()));
    return out;
}

double mmmr_objective(const Vector& theta, const ResidualModel& base, const Dataset& data,
                      const KernelSpec& spec) {
    return mmr_u(h_matrix(base.with_theta(theta), data, spec)).value;
}

double QuadraticForm::value(const Vector& theta) const {
    return theta.dot(A * theta) - 2.0 * b.dot(theta) + c;
}

namespace {

// Residuals linear in theta decompose as psi_c(z_i) = a(i,c) - G_c.row(i) . theta.
struct LinearParts {
    Matrix a;                // n x q
    std::vector<Matrix> G;   // q matrices, each n x r
};

LinearParts linear_decomposition(const ResidualModel& base, const Dataset& data) {
    data.validate();
    require_finite(data.Z, "mmmr: data");
    const int n = data.n();
    const int r = static_cast<int>(base.theta.size());
    LinearParts parts;
    switch (base.kind) {
        case ModelKind::regression:
        case ModelKind::iv_regression: {
            require(r >= 1 && r <= data.p() - 1, "mmmr: theta/regressor count mismatch");
            parts.a = data.Z.col(0);
            parts.G.push_back(data.Z.middleCols(1, r));
            break;
        }
        case ModelKind::simeq: {
            require(r == 4 && data.p() == 4, "mmmr: simeq layout is (Q, P, R, W)");
            parts.a.resize(n, 2);
            parts.a.col(0) = data.Z.col(0);
            parts.a.col(1) = data.Z.col(0);
            Matrix g_demand = Matrix::Zero(n, 4);
            g_demand.col(0) = data.Z.col(1);  // P
            g_demand.col(1) = data.Z.col(2);  // R
            Matrix g_supply = Matrix::Zero(n, 4);
            g_supply.col(2) = data.Z.col(1);  // P
            g_supply.col(3) = data.Z.col(3);  // W
            parts.G.push_back(std::move(g_demand));
            parts.G.push_back(std::move(g_supply));
            break;
        }
        case ModelKind::quantile:
            throw InputError("mmmr: quantile residuals are not linear in theta; "
                             "use the numeric path with a search box");
    }
    return parts;
}

}  // namespace

QuadraticForm mmmr_quadratic(const ResidualModel& base, const Dataset& data,
                             const KernelSpec& spec) {
    const LinearParts parts = linear_decomposition(base, data);
    const int n = data.n();
    require(n >= 2, "mmmr: need n >= 2");
    Matrix K = gram(resolve_bandwidth(spec, data.x()), data.x());
    K.diagonal().setZero();  // U-statistic: off-diagonal pairs only
    const double scale = 1.0 / (static_cast<double>(n) * (n - 1));

    const int r = static_cast<int>(base.theta.size());
    QuadraticForm qf;
    qf.A = Matrix::Zero(r, r);
    qf.b = Vector::Zero(r);
    qf.c = 0.0;
    for (std::size_t c = 0; c < parts.G.size(); ++c) {
        const Matrix& G = parts.G[c];
        const Vector ac = parts.a.col(static_cast<Eigen::Index>(c));
        const Matrix KG = K * G;
        qf.A += scale * (G.transpose() * KG);
        qf.b += scale * (KG.transpose() * ac);
        qf.c += scale * ac.dot(K * ac);
    }
    return qf;
}

FitResult mmmr_fit(const ResidualModel& base, const Dataset& data, const KernelSpec& spec) {
    QuadraticForm qf = mmmr_quadratic(base, data, spec);
    const Matrix A = 0.5 * (qf.A + qf.A.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    const Vector abs_eigs = eig.eigenvalues().cwiseAbs();
    const double emax = abs_eigs.maxCoeff();
    const double emin = abs_eigs.minCoeff();
    const double rcond = emax > 0.0 ? emin / emax : 0.0;
    if (rcond < 1e-12) {
        std::ostringstream msg;
        msg << "mmmr_fit: normal matrix is singular to working precision (rcond = " << rcond
            << ")";
        throw IllPosedError(msg.str());
    }
    const Vector theta_hat = A.ldlt().solve(qf.b);
    QuadraticForm sym{A, qf.b, qf.c};
    return FitResult{theta_hat, sym.value(theta_hat)};
}

namespace {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

FitResult mmmr_fit_numeric(const ResidualModel& base, const Dataset& data, const KernelSpec& spec,
                           const Vector& lower, const Vector& upper) {
    const int r = static_cast<int>(base.theta.size());
    require(lower.size() == r && upper.size() == r, "mmmr_fit_numeric: box dimension mismatch");
    require((upper.array() > lower.array()).all(), "mmmr_fit_numeric: empty box");

    const KernelSpec rs = resolve_bandwidth(spec, data.x());
    auto objective = [&](const Vector& theta) { return mmmr_objective(theta, base, data, rs); };

    constexpr double kTol = 1e-8;
    constexpr int kMaxSweeps = 100;
    Vector theta = 0.5 * (lower + upper);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const Vector before = theta;
        for (int j = 0; j < r; ++j) {
            auto slice = [&](double v) {
                Vector t = theta;
                t(j) = v;
                return objective(t);
            };
            theta(j) = golden_section(slice, lower(j), upper(j), kTol);
        }
        if ((theta - before).cwiseAbs().maxCoeff() < kTol) break;
    }
    return FitResult{theta, objective(theta)};
}

IVSolution mmr_iv_solve(const IVProblem& problem) {
    const Eigen::Index n = problem.treatments.rows();
    require(n >= 1, "mmr_iv_solve: empty problem");
    require(problem.outcomes.size() == n && problem.instruments.rows() == n,
            "mmr_iv_solve: row count mismatch");
    require(problem.lambda > 0.0, "mmr_iv_solve: lambda must be positive");
    require_finite(problem.treatments, "mmr_iv_solve: treatments");
    require_finite(problem.outcomes, "mmr_iv_solve: outcomes");
    require_finite(problem.instruments, "mmr_iv_solve: instruments");

    const KernelSpec k_spec = resolve_bandwidth(problem.instrument_kernel, problem.instruments);
    const KernelSpec l_spec = resolve_bandwidth(problem.treatment_kernel, problem.treatments);
    const Matrix K = gram(k_spec, problem.instruments);
    Matrix L = gram(l_spec, problem.treatments);

    const double n2lambda = static_cast<double>(n) * n * problem.lambda;
    bool jittered = false;
    Vector alpha;
    for (;;) {
        const Matrix LK = L * K;
        const Matrix system = LK * L + n2lambda * L;
        const Vector rhs = LK * problem.outcomes;
        alpha = system.ldlt().solve(rhs);
        const double resid = (system * alpha - rhs).norm();
        if (resid <= 1e-8 * rhs.norm() || (rhs.norm() == 0.0 && resid == 0.0)) break;
        if (jittered)
            throw RegularizationError(
                "mmr_iv_solve: treatment Gram matrix is too rank-deficient even after "
                "diagonal jitter; increase lambda or perturb the inputs");
        L.diagonal().array() += 1e-10 * L.trace() / static_cast<double>(n);
        jittered = true;
    }

    IVSolution sol;
    sol.alpha = std::move(alpha);
    sol.train_points = problem.treatments;
    sol.treatment_kernel = l_spec;
    sol.jitter_applied = jittered;
    return sol;
}

}  // namespace kcm
