#pragma once

#include <string>

#include "kcm/common.hpp"

namespace kcm {

enum class KernelFamily { rbf, laplacian, imq, linear, polynomial };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Kernel family plus hyperparameters.
///
/// rbf:        k(x,y) = exp(-|x-y|_2^2 / (2 sigma^2))
/// laplacian:  k(x,y) = exp(-|x-y|_1 / sigma)
/// imq:        k(x,y) = (c^2 + |x-y|_2^2)^(-gamma)
/// linear:     k(x,y) = x.y
/// polynomial: k(x,y) = (x.y + offset)^degree
///
/// linear and polynomial are not integrally strictly positive definite; they
/// exist to exercise finite feature-space identities and carry no consistency
/// guarantees for the tests built on top.
struct KernelSpec {
    KernelFamily family = KernelFamily::rbf;
    double bandwidth = 1.0;         // rbf, laplacian
    bool median_bandwidth = false;  // resolve against data before evaluating
    double c = 1.0;                 // imq
    double gamma = 0.5;             // imq
    int degree = 2;                 // polynomial
    double offset = 0.0;            // polynomial

    static KernelSpec rbf(double sigma);
    static KernelSpec rbf_median();
    static KernelSpec laplacian(double sigma);
    static KernelSpec laplacian_median();
    static KernelSpec imq(double c, double gamma);
    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset);

    bool shift_invariant() const;  // rbf, laplacian, imq
    bool ispd() const;             // rbf, laplacian, imq
    void validate() const;
};

double eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y);

/// n x n Gram matrix. Each pair is evaluated once and mirrored, so the result
/// is exactly symmetric; rows may be filled in parallel without changing any
/// entry.
Matrix gram(const KernelSpec& spec, const Matrix& X);

/// Median of the n(n-1)/2 pairwise Euclidean distances (strict upper
/// triangle; an even count averages the two central order statistics). The
/// value is used directly as sigma in the rbf/laplacian kernels. Throws
/// DegenerateDataError when every pairwise distance is zero.
double median_heuristic(const Matrix& X);

/// Returns a copy of spec with a median bandwidth replaced by the concrete
/// median_heuristic(X) value.
KernelSpec resolve_bandwidth(const KernelSpec& spec, const Matrix& X);

}  // namespace kcm
