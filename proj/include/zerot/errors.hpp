// Copyright 2026 The zerot Authors
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

#ifndef ZEROT_ERRORS_HPP
#define ZEROT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zerot {

/// Bad user-supplied input (ranges, grids, schemas).
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An instance exceeds a hard size bound (e.g. the brute-force oracle).
class SizeError : public InputError {
  public:
    using InputError::InputError;
};

/// Math domain error, e.g. a coupling requested outside (0,1).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// An internal precondition did not hold. Usually indicates an upstream bug.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class FitFailure : public std::runtime_error {
  public:
    FitFailure(const std::string& what, double best_chi2)
        : std::runtime_error(what), best_chi2_(best_chi2) {}
    double best_chi2() const { return best_chi2_; }

  private:
    double best_chi2_;
};

class IoError : public std::runtime_error {
  public:
    IoError(const std::string& what, std::size_t completed_points)
        : std::runtime_error(what + " (completed points: " + std::to_string(completed_points) + ")"),
          completed_(completed_points) {}
    std::size_t completed_points() const { return completed_; }

  private:
    std::size_t completed_;
};

}  // namespace zerot

#endif
