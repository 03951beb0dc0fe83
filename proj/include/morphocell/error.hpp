#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace morphocell {

/// Broad failure class, used for CLI exit codes and HTTP status mapping.
enum class ErrorCategory {
    Input,   // malformed DSL, bad configuration, unbound parameters
    Domain,  // numerically undefined evaluation, t <= 0, empty results
    Io,      // sink or file failures
};

class Error : public std::runtime_error {
public:
    Error(std::string code, ErrorCategory category, const std::string& message,
          std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(message),
          code_(std::move(code)),
          category_(category),
          position_(position) {}

    /// Machine-readable code such as "PARSE_ERROR" or "TIME_NOT_POSITIVE".
    const std::string& code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_; }
    /// Character offset into the DSL source, when the error has one.
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::string code_;
    ErrorCategory category_;
    std::optional<std::size_t> position_;
};

class LexError : public Error {
public:
    LexError(std::size_t position, char character)
        : Error("LEX_ERROR", ErrorCategory::Input,
                "unexpected character '" + std::string(1, character) + "' at offset " +
                    std::to_string(position),
                position),
          character_(character) {}
    char character() const noexcept { return character_; }

private:
    char character_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected)
        : Error("PARSE_ERROR", ErrorCategory::Input,
                "expected " + expected + " at offset " + std::to_string(position), position),
          expected_(std::move(expected)) {}
    const std::string& expected() const noexcept { return expected_; }

private:
    std::string expected_;
};

class ArityError : public Error {
public:
    ArityError(std::size_t position, const std::string& function, std::size_t expected,
               std::size_t got)
        : Error("ARITY_ERROR", ErrorCategory::Input,
                function + " takes " + std::to_string(expected) + " argument(s), got " +
                    std::to_string(got),
                position) {}
};

class UnboundParam : public Error {
public:
    explicit UnboundParam(const std::string& name)
        : Error("UNBOUND_PARAM", ErrorCategory::Input, "parameter '" + name + "' is not bound"),
          name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error("INVALID_INPUT", ErrorCategory::Input, message) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error("DOMAIN_ERROR", ErrorCategory::Domain, message) {}
};

class TimeError : public Error {
public:
    explicit TimeError(double t)
        : Error("TIME_NOT_POSITIVE", ErrorCategory::Domain,
                "time parameter must be positive, got " + std::to_string(t)) {}
};

class OriginError : public Error {
public:
    OriginError() : Error("ORIGIN", ErrorCategory::Domain, "angle is undefined at the origin") {}
};

class EmptyMesh : public Error {
public:
    explicit EmptyMesh(const std::string& message)
        : Error("EMPTY_MESH", ErrorCategory::Domain, message) {}
};

class SinkError : public Error {
public:
    explicit SinkError(const std::string& message)
        : Error("SINK_ERROR", ErrorCategory::Io, message) {}
};

}  // namespace morphocell
