#pragma once

#include "kcm/common.hpp"
#include "kcm/models.hpp"
#include "kcm/rng.hpp"

namespace kcm {

enum class RegVariant { hom, het };

/// Linear regression draws: X ~ N(0, I_d), y = 1'x + e with
/// hom: e ~ N(0,1); het: e = eps * sqrt(0.1 + 0.1 |x|^2), eps ~ N(0,1).
/// Columns are (y, x_1..x_d); x_index selects the x block.
Dataset gen_reg(int n, int d, RegVariant variant, RngStream& rng);

/// Supply/demand equilibrium draws: columns (Q, P, R, W) with
///   Q = l11 R + l12 W + V1,  P = l21 R + l22 W + V2,
/// (l11,l12,l21,l22) = (1,-1,1,1), R and W independent standard normal, and
/// (V1, V2) jointly Gaussian with variance 1e-3 each and covariance
/// 1e-3/sqrt(2), independent of (R, W). x_index selects (R, W).
Dataset gen_simeq(int n, RngStream& rng);

/// The regression truth used by the experiments: a vector of ones.
Vector reg_true_theta(int d);

/// Structural parameters (a_d, b_d, a_s, b_s) implied by reduced-form
/// coefficients (l11, l12, l21, l22):
///   a_s = l11/l21, b_s = l12 - a_s l22, a_d = a_s + b_s/l22,
///   b_d = -l21 b_s / l22.
/// Throws SingularSystemError when l21 or l22 is zero or the implied solution
/// fails to reproduce the inputs on back-substitution.
Eigen::Vector4d simeq_true_theta(double l11, double l12, double l21, double l22);

}  // namespace kcm
