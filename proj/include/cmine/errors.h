// Copyright 2026 The cmine Authors.
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

#ifndef CMINE_ERRORS_H_
#define CMINE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmine {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A text input (knowledge source, bucket file, trigger file, config file)
// is malformed. line() is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid or inconsistent configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A configuration value that is declared but not implemented (stem_mode=lemma).
class UnsupportedError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Index-time and search-time normalization fingerprints differ.
class ConfigMismatchError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A serialized index is truncated, corrupted or of another format version.
class IndexFormatError : public Error {
 public:
  using Error::Error;
};

// A document is not valid UTF-8.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmine

#endif  // CMINE_ERRORS_H_
