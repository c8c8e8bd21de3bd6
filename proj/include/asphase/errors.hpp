// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace asphase {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed specs, mismatched spaces, invalid paths.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SpaceMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A path comes closer to the fluxon than the exclusion radius.
class GeometryError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Fock truncation drops more probability than allowed.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double tail)
        : Error(what), tail_(tail) {}
    double tail() const noexcept { return tail_; }

private:
    double tail_;
};

/// Two independent numerical routes disagree beyond tolerance.
class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

} // namespace asphase
