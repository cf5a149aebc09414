#pragma once

#include <stdexcept>
#include <string>

namespace spoofdet {

// Base for all library errors so callers can catch one type at the boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry / numeric preconditions
struct DegenerateGeometry : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct UnknownSatellite : Error { using Error::Error; };

// IMU pipeline
struct InsufficientData : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct NoMotion : Error { using Error::Error; };

// Detector
struct NotIdentifiable : Error { using Error::Error; };

// Configuration
struct ConfigError : Error { using Error::Error; };
struct UnknownPreset : ConfigError { using ConfigError::ConfigError; };

// Parsers carry a 1-based line (or row) number alongside the message.
struct ParseError : Error {
    ParseError(std::string msg, long line_arg)
        : Error(msg + " (line " + std::to_string(line_arg) + ")"), line(line_arg) {}
    long line;
};
struct MalformedHeader : ParseError { using ParseError::ParseError; };
struct MalformedEpoch : ParseError { using ParseError::ParseError; };
struct UnsupportedVersion : ParseError { using ParseError::ParseError; };
struct SchemaMismatch : ParseError { using ParseError::ParseError; };
struct NonMonotonicTime : ParseError { using ParseError::ParseError; };

struct NoOverlap : Error { using Error::Error; };

}  // namespace spoofdet
