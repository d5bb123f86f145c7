#pragma once

#include <stdexcept>
#include <string>

namespace satsmell {

// Error category drives the CLI exit code: parse = 2, data = 3, config = 4.
enum class ErrorCategory { Parse, Data, Config };

struct Error : std::runtime_error {
    ErrorCategory category;
    Error(ErrorCategory cat, const std::string& msg) : std::runtime_error(msg), category(cat) {}
};

struct MalformedReport : Error {
    explicit MalformedReport(const std::string& msg) : Error(ErrorCategory::Parse, msg) {}
};

struct UnknownSeverity : Error {
    explicit UnknownSeverity(const std::string& msg) : Error(ErrorCategory::Parse, msg) {}
};

struct UnknownSmellKind : Error {
    explicit UnknownSmellKind(const std::string& msg) : Error(ErrorCategory::Parse, msg) {}
};

struct UnresolvablePackage : Error {
    explicit UnresolvablePackage(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct SampleTooSmall : Error {
    explicit SampleTooSmall(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct ConstantSample : Error {
    explicit ConstantSample(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct ConstantInput : Error {
    explicit ConstantInput(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct TooShort : Error {
    explicit TooShort(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct AllZeroDifferences : Error {
    explicit AllZeroDifferences(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct EmptyRanking : Error {
    explicit EmptyRanking(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct UnknownCombo : Error {
    explicit UnknownCombo(const std::string& msg) : Error(ErrorCategory::Data, msg) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& msg) : Error(ErrorCategory::Config, msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorCategory::Config, msg) {}
};

}  // namespace satsmell
