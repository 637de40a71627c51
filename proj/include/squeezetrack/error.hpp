// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace squeezetrack {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed command line or configuration file (CLI exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or configuration (CLI exit code 3).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The squeezing photon flux of a (gamma, r) pair exceeds the total flux
/// budget. Kept distinct so that parameter searches can skip such proposals.
class FeasibilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Quadrature non-convergence, non-finite simulation state (CLI exit code 4).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Files that cannot be read or written (CLI exit code 1).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace squeezetrack
