// Copyright 2026 The rbreuse Authors
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

namespace rbreuse {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions or qubit counts do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside its documented domain (probability not in [0,1],
/// non-unitary matrix, unknown channel name, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant failed beyond its tolerance, e.g. a survival
/// probability outside [0,1] by more than the probability slack.
class NumericalViolation : public Error {
 public:
  using Error::Error;
};

/// Variance coefficients carry no information (Y = Z = 0).
class DegenerateStatistics : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbreuse
