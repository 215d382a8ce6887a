/*
 Copyright 2026 The nlreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NLREG_ERRORS_HPP
#define NLREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlreg {

/// Invalid user-supplied configuration (dimensions, boxes, gains, poles).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A smooth map cannot be differentiated to the requested jet order.
class CapabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical evidence that a standing assumption (bounded zero dynamics,
/// compact attractor) does not hold for the system at hand.
class AssumptionViolation : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

/// Too few usable samples for a log-linear decay fit.
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The dilation search ran past its cap. Carries the best rate seen.
class SearchError : public std::runtime_error {
public:
  SearchError(const std::string& what, double best_kappa, double best_rate)
      : std::runtime_error(what), best_kappa_(best_kappa),
        best_rate_(best_rate) {}

  double best_kappa() const { return best_kappa_; }
  double best_rate() const { return best_rate_; }

private:
  double best_kappa_;
  double best_rate_;
};

} // namespace nlreg

#endif // NLREG_ERRORS_HPP
