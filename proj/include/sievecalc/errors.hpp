#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sievecalc {

// Error categories, mirrored in the CLI's machine-readable error documents.
enum class ErrorCode { Parse, Validation, Domain, Guard };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string witness = {})
        : std::runtime_error(message), code_(code), witness_(std::move(witness)) {}

    ErrorCode code() const { return code_; }
    const std::string& witness() const { return witness_; }

    const char* code_name() const {
        switch (code_) {
            case ErrorCode::Parse: return "parse";
            case ErrorCode::Validation: return "validation";
            case ErrorCode::Domain: return "domain";
            case ErrorCode::Guard: return "guard";
        }
        return "unknown";
    }

private:
    ErrorCode code_;
    std::string witness_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& message, std::string witness = {})
        : Error(ErrorCode::Parse, message, std::move(witness)) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& message, std::string witness = {})
        : Error(ErrorCode::Validation, message, std::move(witness)) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& message, std::string witness = {})
        : Error(ErrorCode::Domain, message, std::move(witness)) {}
};

struct GuardError : Error {
    explicit GuardError(const std::string& message, std::string witness = {})
        : Error(ErrorCode::Guard, message, std::move(witness)) {}
};

}  // namespace sievecalc
