// Copyright 2026 The qvolume Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvolume {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
   public:
    using Error::Error;
};

class UnknownFamily : public Error {
   public:
    using Error::Error;
};

/// A coordinate vector or matrix does not have the size its family requires.
class DimensionMismatch : public Error {
   public:
    using Error::Error;
};

class InvalidInput : public Error {
   public:
    using Error::Error;
};

/// A matrix handed to `matrix_to_coords` has a component orthogonal to the family subspace.
class OutOfSubspace : public Error {
   public:
    using Error::Error;
};

class NumericalFailure : public Error {
   public:
    using Error::Error;
};

/// n != n_A * n_B.
class InvalidPartition : public Error {
   public:
    using Error::Error;
};

class InvalidConfig : public Error {
   public:
    using Error::Error;
};

/// Hit-and-run could not find a direction with a non-trivial chord.
class DegenerateDirection : public Error {
   public:
    using Error::Error;
};

/// Every multiphase repetition was aborted because some phase found fewer than `min_hits` states.
class InsufficientStatistics : public Error {
   public:
    InsufficientStatistics(const std::string &what, std::vector<std::vector<std::uint64_t>> per_phase_hits)
        : Error(what), per_phase_hits_(std::move(per_phase_hits)) {
    }

    /// Outer index: repetition. Inner index: phase. Value: number of states found.
    const std::vector<std::vector<std::uint64_t>> &per_phase_hits() const {
        return per_phase_hits_;
    }

   private:
    std::vector<std::vector<std::uint64_t>> per_phase_hits_;
};

}  // namespace qvolume
