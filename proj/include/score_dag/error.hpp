#pragma once

#include <stdexcept>
#include <string>

namespace score_dag {

// Failure categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { Config = 1, Data = 2, Numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

/// Invalid parameters or preconditions (bad node counts, probabilities, flags).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Malformed or degenerate input data, including cyclic graphs.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// Raised when a graph that must be acyclic is not. `node` is one member of a cycle.
class CycleError : public DataError {
public:
    CycleError(int node, const std::string& what) : DataError(what), node_(node) {}
    int node() const noexcept { return node_; }

private:
    int node_;
};

/// Factorization failures and other breakdowns of the linear algebra.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace score_dag
