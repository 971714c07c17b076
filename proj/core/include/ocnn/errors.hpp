#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocnn {

/// Base class for input-validation failures. The CLI maps these to exit 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotOrthogonal : ValidationError {
    using ValidationError::ValidationError;
};

struct ConvergenceFailure : ValidationError {
    using ValidationError::ValidationError;
};

struct NonConvergence : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct GeometryMismatch : ValidationError {
    using ValidationError::ValidationError;
};

/// Base class for file and format failures. The CLI maps these to exit 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// IDX stream whose magic number is not a supported ubyte code.
/// `offset` is the byte offset of the offending field.
struct BadMagic : IoError {
    std::size_t offset;
    BadMagic(std::size_t off, const std::string& what)
        : IoError("bad magic at offset " + std::to_string(off) + ": " + what), offset(off) {}
};

/// IDX stream shorter (or longer) than its header promises.
struct TruncatedPayload : IoError {
    std::size_t offset;
    TruncatedPayload(std::size_t off, const std::string& what)
        : IoError("truncated payload at offset " + std::to_string(off) + ": " + what),
          offset(off) {}
};

/// IDX dimension vector whose element product does not fit in memory.
struct DimensionOverflow : IoError {
    std::size_t offset;
    DimensionOverflow(std::size_t off, const std::string& what)
        : IoError("dimension overflow at offset " + std::to_string(off) + ": " + what),
          offset(off) {}
};

}  // namespace ocnn
