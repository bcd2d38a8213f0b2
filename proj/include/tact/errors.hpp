// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace tact {

/// Base class of every recoverable error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise unusable sensor sample.
struct SignalError : Error {
    using Error::Error;
};

/// An operation needs more samples than the caller provided.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Spectrum with zero total power; the median frequency is undefined.
struct DegenerateSpectrumError : Error {
    using Error::Error;
};

/// Training data unusable for a density fit (too few points, zero variance).
struct DegenerateDataError : Error {
    using Error::Error;
};

/// Malformed configuration, file header, or argument combination.
struct ValidationError : Error {
    using Error::Error;
};

/// Filesystem problem: missing file, unreadable or unwritable path.
struct IoError : Error {
    using Error::Error;
};

}  // namespace tact
