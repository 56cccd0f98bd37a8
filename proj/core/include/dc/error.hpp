#pragma once

#include <stdexcept>
#include <string>

namespace dc {

enum class ErrorCode {
    ParseError,
    SchemaError,
    VersionMismatch,
    VocabularyError,
    UnsupportedFeature,
    NamingError,
    BudgetExceeded,
    InvalidArgument,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char *error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::SchemaError: return "schema-error";
    case ErrorCode::VersionMismatch: return "version-mismatch";
    case ErrorCode::VocabularyError: return "vocabulary-error";
    case ErrorCode::UnsupportedFeature: return "unsupported-feature";
    case ErrorCode::NamingError: return "naming-error";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IoError: return "io-error";
    }
    return "unknown";
}

} // namespace dc
