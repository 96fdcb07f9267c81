// Copyright 2026 The hsfpn Authors. All Rights Reserved.
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

#ifndef HSFPN_ERRORS_H_
#define HSFPN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsfpn {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Extents, ranks, channel counts or block geometry do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value is out of its documented range (alpha, non-finite weights, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The input is well formed but the requested statistic is undefined,
// e.g. a constant SCR background.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents. Carries the byte offset at which decoding failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace hsfpn

#endif  // HSFPN_ERRORS_H_
