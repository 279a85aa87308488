#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kcm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// NaN or Inf found where finite values are required.
class NumericInputError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedKernelError : public InputError {
public:
    using InputError::InputError;
};

class IllPosedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RegularizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public InputError {
public:
    using InputError::InputError;
};

void require(bool condition, const std::string& what);
void require_finite(const Matrix& m, const std::string& what);
void require_finite(const Vector& v, const std::string& what);

// Runs body(i) for every i in [0, count), split into contiguous chunks, one
// per worker. body must only write to slots owned by its index, so the result
// is identical for any thread count. n_threads <= 1 runs sequentially.
void parallel_for(std::int64_t count, int n_threads,
                  const std::function<void(std::int64_t)>& body);

}  // namespace kcm
