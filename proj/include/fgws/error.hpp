//
// Copyright 2026 The FGWS Authors
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
//

#ifndef FGWS_ERROR_HPP_
#define FGWS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fgws {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller misused an API: wrong split, unknown tag, invalid knob value.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed or violates a documented invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

// A file line failed to parse. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A numerical routine failed to reach its requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure inside a pipeline stage so callers can report which stage
// aborted.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what,
             bool data_error = false)
      : Error("stage '" + stage + "' failed: " + what),
        stage_(std::move(stage)),
        data_error_(data_error) {}

  const std::string& stage() const { return stage_; }
  // True when the underlying failure was a DataError.
  bool data_error() const { return data_error_; }

 private:
  std::string stage_;
  bool data_error_;
};

}  // namespace fgws

#endif  // FGWS_ERROR_HPP_
