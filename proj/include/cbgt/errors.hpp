// Copyright 2026 The Authors.
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

namespace cbgt {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument referenced something outside its domain, e.g. an element id
// outside the ground set.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The requested query is not available for this set-system variant.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A configured size budget (time horizon, product ground set, state space)
// was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// The instance data contradicts itself (bad witness, uncoverable element...).
class InstanceError : public Error {
 public:
  using Error::Error;
};

// A proven invariant failed at runtime. Always indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbgt
