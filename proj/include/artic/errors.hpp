/*
 * Copyright 2026 The Artic Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARTIC_ERRORS_HPP_
#define ARTIC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace artic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// User-facing errors (bad input files or configuration). The CLI maps these
// to exit code 1; everything else is a runtime failure (exit code 2).
class UserError : public Error {
 public:
  using Error::Error;
};

class LoadError : public UserError {
 public:
  using UserError::UserError;
};
class SchemaError : public UserError {
 public:
  using UserError::UserError;
};
class FormatError : public UserError {
 public:
  using UserError::UserError;
};
class ConfigError : public UserError {
 public:
  using UserError::UserError;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};
class StatisticsError : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class TransportError : public Error {
 public:
  using Error::Error;
};
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// Raised by the training loop when a loss term or parameter stops being finite.
class NonFiniteError : public Error {
 public:
  NonFiniteError(std::string term, long step)
      : Error("non-finite value in '" + term + "' at step " + std::to_string(step)),
        term_(std::move(term)),
        step_(step) {}
  const std::string& term() const { return term_; }
  long step() const { return step_; }

 private:
  std::string term_;
  long step_;
};

}  // namespace artic

#endif  // ARTIC_ERRORS_HPP_
