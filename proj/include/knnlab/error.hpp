// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace knnlab {

/// Raised when a caller violates an operation's preconditions: a point of the
/// wrong kind for a space, k larger than the sample, an unknown problem name.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an exact search is asked to run beyond its enumeration bound.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace knnlab
