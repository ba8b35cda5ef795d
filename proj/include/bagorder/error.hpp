// Copyright 2026 The bagorder Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bagorder {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// I/O failure while reading or writing corpus and table files.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// A literal boundary marker was found in corpus text.
class ReservedTokenError : public Error {
 public:
  explicit ReservedTokenError(std::size_t line)
      : Error("reserved token '*' at line " + std::to_string(line)),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Malformed table file. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

/// Invalid model/order combination or an invalid option value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Every partial arrangement reached probability zero.
class NoArrangement : public Error {
 public:
  explicit NoArrangement(std::size_t level)
      : Error("no arrangement with nonzero score (search died at level " +
              std::to_string(level) + ")"),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

/// Brute-force enumeration refused because the bag exceeds the cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace bagorder
