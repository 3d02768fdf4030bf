// Copyright 2026 The Ququart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUQUART_ERROR_HPP
#define QUQUART_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ququart {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (normalization, Hermiticity,
/// parameter range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The pump polarization does not drive the requested crystal.
class NoEmissionError : public Error {
 public:
  using Error::Error;
};

/// Operation needs a fully polarized Stokes vector.
class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The measurement settings do not span the space of Hermitian operators.
class CompletenessError : public Error {
 public:
  using Error::Error;
};

/// Count data carry no information (e.g. zero total counts).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Too many bootstrap resamples failed.
class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ququart

#endif  // QUQUART_ERROR_HPP
