#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xsw {

enum class ErrorCode {
    ZeroInput,
    Overflow,
    InvalidArgument,
    MalformedSequence,
    EmptyInput,
    InvalidConfig,
    NoQuorum,
    MissingPrice,
    MalformedData,
    MissingOracleRequest,
    UnknownSelector,
    MalformedPayload,
    Parse,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedSequence: return "MalformedSequence";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoQuorum: return "NoQuorum";
    case ErrorCode::MissingPrice: return "MissingPrice";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::MissingOracleRequest: return "MissingOracleRequest";
    case ErrorCode::UnknownSelector: return "UnknownSelector";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// what() without the code prefix, for re-wrapping with more context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace xsw
