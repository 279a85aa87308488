#include "kcm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kcm {

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::rbf: return "rbf";
        case KernelFamily::laplacian: return "laplacian";
        case KernelFamily::imq: return "imq";
        case KernelFamily::linear: return "linear";
        case KernelFamily::polynomial: return "polynomial";
    }
    return "?";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "rbf" || name == "gaussian") return KernelFamily::rbf;
    if (name == "laplacian") return KernelFamily::laplacian;
    if (name == "imq") return KernelFamily::imq;
    if (name == "linear") return KernelFamily::linear;
    if (name == "polynomial") return KernelFamily::polynomial;
    throw InputError("unknown kernel family: " + name);
}

KernelSpec KernelSpec::rbf(double sigma) {
    KernelSpec s;
    s.family = KernelFamily::rbf;
    s.bandwidth = sigma;
    return s;
}

KernelSpec KernelSpec::rbf_median() {
    KernelSpec s;
    s.family = KernelFamily::rbf;
    s.median_bandwidth = true;
    return s;
}

KernelSpec KernelSpec::laplacian(double sigma) {
    KernelSpec s;
    s.family = KernelFamily::laplacian;
    s.bandwidth = sigma;
    return s;
}

KernelSpec KernelSpec::laplacian_median() {
    KernelSpec s;
    s.family = KernelFamily::laplacian;
    s.median_bandwidth = true;
    return s;
}

KernelSpec KernelSpec::imq(double c, double gamma) {
    KernelSpec s;
    s.family = KernelFamily::imq;
    s.c = c;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.family = KernelFamily::linear;
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    KernelSpec s;
    s.family = KernelFamily::polynomial;
    s.degree = degree;
    s.offset = offset;
    return s;
}

bool KernelSpec::shift_invariant() const {
    return family == KernelFamily::rbf || family == KernelFamily::laplacian ||
           family == KernelFamily::imq;
}

bool KernelSpec::ispd() const { return shift_invariant(); }

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::rbf:
        case KernelFamily::laplacian:
            if (!median_bandwidth)
                require(bandwidth > 0.0, "kernel bandwidth must be positive");
            break;
        case KernelFamily::imq:
            require(c > 0.0, "imq kernel: c must be positive");
            require(gamma > 0.0, "imq kernel: gamma must be positive");
            break;
        case KernelFamily::linear:
            break;
        case KernelFamily::polynomial:
            require(degree >= 1, "polynomial kernel: degree must be >= 1");
            require(offset >= 0.0, "polynomial kernel: offset must be >= 0");
            break;
    }
}

namespace {

// Shared by eval_kernel and gram; a and b may be any Eigen vector expression.
template <typename A, typename B>
double eval_pair(const KernelSpec& spec, const A& a, const B& b) {
    switch (spec.family) {
        case KernelFamily::rbf: {
            const double d2 = (a - b).squaredNorm();
            return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
        }
        case KernelFamily::laplacian: {
            const double d1 = (a - b).cwiseAbs().sum();
            return std::exp(-d1 / spec.bandwidth);
        }
        case KernelFamily::imq: {
            const double d2 = (a - b).squaredNorm();
            return std::pow(spec.c * spec.c + d2, -spec.gamma);
        }
        case KernelFamily::linear:
            return a.dot(b);
        case KernelFamily::polynomial:
            return std::pow(a.dot(b) + spec.offset, spec.degree);
    }
    return 0.0;
}

void check_resolved(const KernelSpec& spec) {
    if (spec.median_bandwidth)
        throw InputError("kernel bandwidth is 'median'; resolve_bandwidth against data first");
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y) {
    spec.validate();
    check_resolved(spec);
    require(x.size() >= 1, "eval_kernel: empty input");
    if (x.size() != y.size()) throw InputError("eval_kernel: dimension mismatch");
    return eval_pair(spec, x, y);
}

Matrix gram(const KernelSpec& spec, const Matrix& X) {
    spec.validate();
    check_resolved(spec);
    const Eigen::Index n = X.rows();
    require(n >= 1, "gram: need at least one row");
    Matrix G(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = eval_pair(spec, X.row(i), X.row(j));
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

double median_heuristic(const Matrix& X) {
    const Eigen::Index n = X.rows();
    require(n >= 2, "median_heuristic: need n >= 2");
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            dist.push_back((X.row(i) - X.row(j)).norm());
    if (std::all_of(dist.begin(), dist.end(), [](double v) { return v == 0.0; }))
        throw DegenerateDataError(
            "median_heuristic: all pairwise distances are zero; supply a bandwidth");
    std::sort(dist.begin(), dist.end());
    const std::size_t m = dist.size();
    if (m % 2 == 1) return dist[m / 2];
    return 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
}

KernelSpec resolve_bandwidth(const KernelSpec& spec, const Matrix& X) {
    if (!spec.median_bandwidth) return spec;
    KernelSpec out = spec;
    out.bandwidth = median_heuristic(X);
    out.median_bandwidth = false;
    return out;
}

}  // namespace kcm
