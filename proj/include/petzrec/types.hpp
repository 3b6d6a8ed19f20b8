/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_TYPES_HPP_
#define PETZREC_TYPES_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace petzrec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Two elements from different algebras were combined.
class AlgebraMismatchError : public Error {
 public:
  explicit AlgebraMismatchError(const std::string &msg) : Error(msg) {}
};

// A constructor-level invariant failed (non-state input, bad weights, ...).
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string &msg) : Error(msg) {}
};

// A channel failed one of its construction checks (block preservation,
// complete positivity, weighted trace preservation).
class ChannelConstructionError : public Error {
 public:
  explicit ChannelConstructionError(const std::string &msg) : Error(msg) {}
};

// A map that must be strict (positive invertible in -> positive invertible
// out) produced an output below the strictness floor.
class StrictnessError : public Error {
 public:
  explicit StrictnessError(const std::string &msg) : Error(msg) {}
};

// Numerical breakdown beyond the documented clamping thresholds.
class NumericalBreakdownError : public Error {
 public:
  explicit NumericalBreakdownError(const std::string &msg) : Error(msg) {}
};

// Bad harness configuration or malformed input file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &msg) : Error(msg) {}
};

}  // namespace petzrec

#endif  // PETZREC_TYPES_HPP_
