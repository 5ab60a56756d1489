// Copyright 2026 The vbs Authors
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

namespace vbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define VBS_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    using Error::Error;                                          \
    const char* kind() const noexcept override { return #Name; } \
  }

VBS_DEFINE_ERROR(DimensionMismatch);
VBS_DEFINE_ERROR(NonUnitary);
VBS_DEFINE_ERROR(ConstraintViolation);
VBS_DEFINE_ERROR(NumericalFailure);
VBS_DEFINE_ERROR(SingularSystem);
VBS_DEFINE_ERROR(InvalidFrequency);
VBS_DEFINE_ERROR(InvalidMolecule);
VBS_DEFINE_ERROR(SingularJ);
VBS_DEFINE_ERROR(SingularCovariance);
VBS_DEFINE_ERROR(EmptyTable);
VBS_DEFINE_ERROR(InvalidArgument);
VBS_DEFINE_ERROR(ConfigError);

#undef VBS_DEFINE_ERROR

/// Raised when a Fock truncation captures less probability than requested.
class InsufficientTruncation : public Error {
 public:
  InsufficientTruncation(const std::string& what, double achieved_mass)
      : Error(what), achieved_mass_(achieved_mass) {}
  const char* kind() const noexcept override { return "InsufficientTruncation"; }
  double achieved_mass() const noexcept { return achieved_mass_; }

 private:
  double achieved_mass_;
};

}  // namespace vbs
