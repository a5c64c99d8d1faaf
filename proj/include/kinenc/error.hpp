#pragma once

#include <stdexcept>
#include <string>

namespace kinenc {

/// Coarse error category. The CLI maps these onto process exit codes.
enum class ErrorCategory {
    Config = 2,
    Data = 3,
    StaleArtifact = 4,
    Io = 5,
    Domain = 6,
    Protocol = 7,
    Training = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Narrower types so tests and callers can catch exactly what they expect.

struct InvalidSignalError : Error {
    explicit InvalidSignalError(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

struct NotFoundError : Error {
    explicit NotFoundError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};

struct IllPosedExpansionError : Error {
    explicit IllPosedExpansionError(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct TrivialPartitionError : Error {
    explicit TrivialPartitionError(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct ParseError : Error {
    ParseError(const std::string& w, std::size_t line, std::string field)
        : Error(ErrorCategory::Data, "line " + std::to_string(line) + ", field '" + field + "': " + w),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct FeatureError : Error {
    explicit FeatureError(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct TrainingError : Error {
    TrainingError(const std::string& w, int epoch)
        : Error(ErrorCategory::Training, w + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

struct StaleArtifactError : Error {
    explicit StaleArtifactError(const std::string& w) : Error(ErrorCategory::StaleArtifact, w) {}
};

struct ProtocolError : Error {
    explicit ProtocolError(const std::string& w) : Error(ErrorCategory::Protocol, w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCategory::Io, w) {}
};

} // namespace kinenc
