#pragma once

#include <stdexcept>
#include <string>

namespace wislab {

/// Base class for all library errors so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scatterer coincides with an endpoint; bistatic geometry is undefined.
struct DegenerateGeometryError : Error {
    using Error::Error;
};

/// Grid is not the supported 996-tone channelization.
struct UnsupportedChannelizationError : Error {
    using Error::Error;
};

/// Requested resource unit does not exist in the layout (or does not fit the slice).
struct UnknownRuError : Error {
    using Error::Error;
};

/// Not enough snapshots/antennas for the requested analysis. Message names the minimum.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Fewer than two antennas: no aperture to scan.
struct InsufficientApertureError : Error {
    using Error::Error;
};

/// SNR is undefined for an all-zero tensor.
struct UndefinedSnrError : Error {
    using Error::Error;
};

/// Training set is missing at least one class.
struct DegenerateDatasetError : Error {
    using Error::Error;
};

/// Evaluation protocol requires exactly four campaigns per class.
struct UnsupportedProtocolError : Error {
    using Error::Error;
};

/// Capture file violates the binary format. Subtypes name the offending field.
struct CaptureFormatError : Error {
    using Error::Error;
};

struct BadMagicError : CaptureFormatError {
    using CaptureFormatError::CaptureFormatError;
};

struct VersionMismatchError : CaptureFormatError {
    using CaptureFormatError::CaptureFormatError;
};

struct TruncatedPayloadError : CaptureFormatError {
    using CaptureFormatError::CaptureFormatError;
};

/// Run configuration violates the schema (unknown key, bad type, bad range).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace wislab
