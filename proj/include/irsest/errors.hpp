// SPDX-License-Identifier: Apache-2.0
//
// irsest: channel estimation for IRS-assisted mmWave MIMO links
// Copyright (C) 2026 The irsest authors
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

#ifndef IRSEST_ERRORS_HPP
#define IRSEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irsest {

// Shapes of operands do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A scalar or count argument is outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid experiment configuration. Carries the offending field name.
class ConfigError : public ParameterError {
public:
    ConfigError(std::string field, const std::string &what)
        : ParameterError(field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

private:
    std::string field_;
};

// A matrix that should have rank k has fewer than k numerically nonzero
// singular values.
class DegenerateRankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Armijo backtracking exhausted its budget without sufficient decrease.
class StallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// NMSE requested against an all-zero reference channel.
class MetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace irsest

#endif
