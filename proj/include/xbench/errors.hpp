// Copyright 2026 The xbench Authors
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

#ifndef XBENCH_ERRORS_HPP_
#define XBENCH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace xbench {

/// Invalid input data or configuration. Maps to CLI exit status 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimization backend failed, or returned something we cannot trust.
/// Maps to CLI exit status 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A complementarity pair was violated at a reported optimum (big-M caps too
/// small). A SolverError, so callers that only care about solve failures can
/// catch the base.
class ComplementarityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Independent verification disagreed with the optimization path. Exit 3.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xbench

#endif  // XBENCH_ERRORS_HPP_
