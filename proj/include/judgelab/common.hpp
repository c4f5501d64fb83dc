#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace judgelab {

/// Base class for all judgelab errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or usage: unknown template id, invalid provider config,
/// missing API key, bad CLI arguments.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input data: broken JSONL lines, schema violations, mismatched
/// tensor shapes, invalid benchmark files.
class DataError : public Error {
public:
    using Error::Error;
};

/// A model output that could not be parsed into the expected structure
/// (verdict tokens, YES/NO answers, "## Section:" blocks).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A completion backend failure. `status` is the HTTP status when one was
/// received (0 for transport errors and mock failures). `retryable` marks
/// failures the retry policy is allowed to re-attempt.
class ProviderError : public Error {
public:
    ProviderError(const std::string& msg, int status = 0, bool retryable = false)
        : Error(msg), status(status), retryable(retryable) {}

    int status;
    bool retryable;
};

/// FNV-1a 64-bit hash. Used for prompt pinning and content-derived ids;
/// stable across platforms, not cryptographic.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 formatted as a 16-digit lowercase hex string.
std::string fnv1a64_hex(std::string_view bytes);

/// Fraction in [0,1] -> percentage rounded half-up to one decimal (86.875 -> 86.9).
double round_percent1(double fraction);

/// round_percent1 formatted with exactly one decimal, e.g. "86.9".
std::string format_percent1(double fraction);

}  // namespace judgelab
