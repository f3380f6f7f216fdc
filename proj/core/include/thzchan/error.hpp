// SPDX-License-Identifier: Apache-2.0
//
// thzchan - terahertz line-of-sight channel synthesis and sweep post-processing
// Copyright (C) 2026 The thzchan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace thzchan {

// Raised when an input violates a documented invariant or precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A delay profile without any non-zero sample has no peak to report.
class NoPeakError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// File-system or stream failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string &what)
{
    if (!condition)
        throw ValidationError(what);
}

} // namespace detail
} // namespace thzchan
