// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ttconv {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension/shape mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Index outside the valid range of a mode.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable numeric payload.
class DataError : public Error {
public:
    using Error::Error;
};

/// Requested materialization exceeds the configured element budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid factorization plan.
class PlanError : public Error {
public:
    using Error::Error;
};

/// Structured-text parse failure (carries line/field diagnostics in the message).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Semantic validation failure; message lists every violation found.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Reconstructed dummy-channel weights exceed the integrity threshold.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Serialized model fails checksum/bounds validation.
class CorruptionError : public Error {
public:
    using Error::Error;
};

/// Serialized model declares a format version this build does not support.
class VersionError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ttconv
