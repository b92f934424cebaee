#pragma once

#include <stdexcept>
#include <string>

namespace hbsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run/scenario configuration or CLI arguments. Maps to exit code 1.
struct ConfigError : Error { using Error::Error; };

// sensor simulation
struct MissingTraceData : Error { using Error::Error; };
struct OutOfRangeVoltage : Error { using Error::Error; };
struct OutOfRangeLpo : Error { using Error::Error; };

// telemetry wire format; the hub catches this and counts the message as
// parse-rejected instead of letting it escape
struct ParseRejected : Error { using Error::Error; };

// store
struct DuplicateSample : Error { using Error::Error; };
struct ForeignKeyViolation : Error { using Error::Error; };
struct UnknownDevice : Error { using Error::Error; };
struct StorageError : Error { using Error::Error; };

// analysis
struct MisalignedWindow : Error { using Error::Error; };
struct UndefinedRate : Error { using Error::Error; };
struct OvercountDetected : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct InsufficientContext : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };

// csv interop
struct SchemaMismatch : Error { using Error::Error; };
struct PartitionInconsistent : Error { using Error::Error; };
struct TypeError : Error { using Error::Error; };

} // namespace hbsim
