// Copyright 2026 The occmdp Authors
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

#ifndef OCCMDP_ERRORS_HPP_
#define OCCMDP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace occmdp {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance or solution document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document whose content violates a model invariant
/// (index out of range, bad probability row, negative cost, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Bad arguments to an operation (dimension mismatch, non-finite data,
/// wrong number of budgets).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state the theory rules out was reached, e.g. an unbounded occupation
/// LP or a singular system on a closed recurrent class.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A brute-force oracle was asked to enumerate more than its guard allows.
class EnumerationGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Iterative method stopped at its iteration limit.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double final_span)
      : Error(what), final_span_(final_span) {}
  double final_span() const { return final_span_; }

 private:
  double final_span_;
};

/// The instance has more than one recurrent class where a unichain
/// method was requested.
class MultichainRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace occmdp

#endif  // OCCMDP_ERRORS_HPP_
