#pragma once

#include <stdexcept>
#include <string>

namespace hsieve {

// Base for all errors raised by the library. `code()` is a short
// machine-readable tag such as "missing-field:initial".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class InvalidPolicy : public Error {
public:
    using Error::Error;
};

// Raised when a single DET node yields more path summaries than allowed.
class PathCapExceeded : public Error {
public:
    explicit PathCapExceeded(std::size_t cap)
        : Error("resource-cap", "path summary cap of " + std::to_string(cap) + " exceeded"),
          cap_(cap) {}

    [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

// Policy-document errors carry the offending field path (or line for
// malformed JSON) in `context()`.
class ParseError : public Error {
public:
    ParseError(std::string code, std::string context, const std::string& message)
        : Error(std::move(code), context.empty() ? message : context + ": " + message),
          context_(std::move(context)) {}

    [[nodiscard]] const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

} // namespace hsieve
