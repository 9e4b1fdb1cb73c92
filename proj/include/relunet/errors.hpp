// Copyright 2026 The relunet Authors
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

#ifndef RELUNET_ERRORS_HPP_
#define RELUNET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace relunet {

// Shapes of matrices, vectors or inputs do not line up.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A network parameter (or a shift passed to a transform) lies outside [-1, 1].
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// Malformed network / certificate / config document.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A construction refuses its inputs (violated precondition on m, N, K, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Operation is not defined for this network (e.g. clipping a multi-output net).
class UnsupportedError : public std::logic_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace relunet

#endif  // RELUNET_ERRORS_HPP_
