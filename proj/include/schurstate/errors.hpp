// Copyright 2026 The schurstate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace schurstate {

/// Base class of every error raised by the library. The CLI maps the
/// concrete subclass onto its exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or indices do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix function was asked for outside its domain (e.g. log of a
/// singular matrix).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (zero fiber vector,
/// duplicate site, malformed model file, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Dense evaluation would exceed the configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Regions overlap where they must be disjoint.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// An operation's mathematical precondition does not hold for the model
/// (generic condition violated, alpha-limit depends on indices, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An infinite product or sequence did not converge within the iteration
/// budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_value,
                   double tail_estimate)
      : Error(what), last_value_(last_value), tail_estimate_(tail_estimate) {}

  /// Modulus of the last partial product (or sequence term) examined.
  double last_value() const { return last_value_; }
  /// Error bound that was still in force when iteration stopped.
  double tail_estimate() const { return tail_estimate_; }

 private:
  double last_value_;
  double tail_estimate_;
};

}  // namespace schurstate
