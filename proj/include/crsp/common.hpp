// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace crsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Input violates a documented precondition or invariant (bad graph,
/// inconsistent sizes, out-of-range parameter).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerically well-posed computation failed (divergent series,
/// singular system, non-finite intermediate).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem or parse failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crsp
