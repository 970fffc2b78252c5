// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hbias {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (shape mismatch, wrong
/// grammar family, missing tree, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A forward value became NaN or infinite.
class NumericHealthError : public Error {
public:
    using Error::Error;
};

/// Text input (grammar, dataset file, tree, token sequence) could not be
/// parsed. `line()` is 0 when no line applies.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A dataset builder could not reach the requested split size under its
/// filters.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (model, grammar, experiment).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hbias
