#pragma once
// Exception hierarchy shared by every module.

#include <stdexcept>
#include <string>

namespace enigmatom {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed serialized input (story documents, JSONL lines, record files).
class FormatError : public Error {
public:
    FormatError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// A well-formed value violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A question did not match any supported template.
class ParseError : public Error {
public:
    using Error::Error;
};

// NKB produced no usable entities or locations.
class ExtractionError : public Error {
public:
    using Error::Error;
};

// A backend call failed; the raw response (if any) travels with the error.
class BackendError : public Error {
public:
    BackendError(const std::string& what, std::string raw = {})
        : Error(what), raw_(std::move(raw)) {}
    const std::string& raw_response() const noexcept { return raw_; }

private:
    std::string raw_;
};

// A backend answered, but in violation of the record protocol.
class ProtocolError : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace enigmatom
