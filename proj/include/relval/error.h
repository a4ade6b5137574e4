// Copyright 2026 The relval Authors
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

#ifndef RELVAL_ERROR_H_
#define RELVAL_ERROR_H_

#include <stdexcept>
#include <string>

namespace relval {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Geometry for which a decomposition is undefined (e.g. coincident centers).
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Ego capabilities that cannot support the requested maneuver.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Malformed files, configuration, or command-line input.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace relval

#endif  // RELVAL_ERROR_H_
