#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rric {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in the CLI's structured error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& msg) : Error("contract_violation", msg) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error("precondition", msg) {}
};

// The human's feedback is not in the robot's assumed choice set.
class ImpossibleObservation : public Error {
public:
    explicit ImpossibleObservation(const std::string& msg)
        : Error("impossible_observation", msg) {}
};

class NumericalDegeneracy : public Error {
public:
    explicit NumericalDegeneracy(const std::string& msg) : Error("numerical_degeneracy", msg) {}
};

class InfeasibleClass : public Error {
public:
    explicit InfeasibleClass(const std::string& msg) : Error("infeasible_class", msg) {}
};

class EmptyBiasSet : public Error {
public:
    explicit EmptyBiasSet(const std::string& msg) : Error("empty_bias_set", msg) {}
};

class InfeasibleConstruction : public Error {
public:
    explicit InfeasibleConstruction(const std::string& msg)
        : Error("infeasible_construction", msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse_error", msg) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error("usage_error", msg) {}
};

class FileError : public Error {
public:
    explicit FileError(const std::string& msg) : Error("file_error", msg) {}
};

} // namespace rric
