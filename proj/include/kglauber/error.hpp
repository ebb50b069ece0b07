// Copyright 2026 The kglauber Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace kglauber {

// Every error thrown by the library derives from Error. The CLI maps each
// subclass to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, non-finite values, overlapping
// index sets, out-of-range constants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An input exceeded what an exact (enumerating) routine is allowed to touch.
class SizeGuard : public Error {
 public:
  using Error::Error;
};

// Recursion depth cap or rejection try cap exceeded at run time.
class RuntimeGuard : public Error {
 public:
  using Error::Error;
};

// Iterative method ran out of iterations.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// File could not be read or parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kglauber
