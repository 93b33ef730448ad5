// Copyright 2026 The mxq Authors
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

namespace mxq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw parameters do not describe a valid queue.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is not defined for this model or argument
/// (wrong regime, missing resurrection, catastrophe rate where none allowed).
class GateError : public Error {
 public:
  using Error::Error;
};

/// A computation lost accuracy or failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mxq
