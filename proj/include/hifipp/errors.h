// include/hifipp/errors.h

// Copyright 2026  The HiFi++ Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HIFIPP_ERRORS_H_
#define HIFIPP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hifipp {

// Every error raised by the toolkit derives from Error so callers can catch
// one type at process boundaries (the CLI does).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signal shorter than a window, misaligned lengths.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Tensor shape contract violated.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration (non-COLA STFT, bad rates, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents; the message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Silent reference, zero-energy noise and similar inputs with no defined result.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf showed up where the numerics must stay finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Corpus layout problems; the message lists every offending path.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace hifipp

#endif  // HIFIPP_ERRORS_H_
