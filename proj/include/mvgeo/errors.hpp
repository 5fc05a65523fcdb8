// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mvgeo {

/// Input outside an operation's mathematical domain (non-positive depth,
/// projection at infinity, degenerate bounding box).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Planes or cameras whose sizes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or truncated file contents.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corrupt, truncated or inconsistent compressed payloads.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mvgeo
