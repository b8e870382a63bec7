#pragma once

#include <stdexcept>
#include <string>

#include "mcmin/types.hpp"

namespace mcmin {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag used by the CLI to pick exit codes and emit error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error("validation", message) {}
};

class NotADistribution : public Error {
public:
    explicit NotADistribution(const std::string& message) : Error("not-a-distribution", message) {}
};

/// A partition that was required to be lumpable is not: two states of one
/// block have lumped rows further apart than the tolerance.
class NotLumpable : public Error {
public:
    NotLumpable(int block, state_t s, state_t t, double deviation, const std::string& message)
        : Error("not-lumpable", message), block(block), s(s), t(t), deviation(deviation) {}

    int block;
    state_t s;
    state_t t;
    double deviation;
};

class LabelMismatch : public Error {
public:
    explicit LabelMismatch(const std::string& message) : Error("label-mismatch", message) {}
};

class SameState : public Error {
public:
    explicit SameState(const std::string& message) : Error("same-state", message) {}
};

class ChainMismatch : public Error {
public:
    explicit ChainMismatch(const std::string& message) : Error("chain-mismatch", message) {}
};

class VerificationFailed : public Error {
public:
    explicit VerificationFailed(const std::string& message) : Error("verification-failed", message) {}
};

class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& message) : Error("too-large", message) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& file, long line, const std::string& message)
        : Error("parse", file + ":" + std::to_string(line) + ": " + message), file(file), line(line) {}

    std::string file;
    long line;
};

class NonStochasticRow : public Error {
public:
    NonStochasticRow(state_t state, double sum, const std::string& message)
        : Error("non-stochastic-row", message), state(state), sum(sum) {}

    state_t state;
    double sum;
};

class SchemaVersionMismatch : public Error {
public:
    explicit SchemaVersionMismatch(const std::string& message) : Error("schema-version", message) {}
};

class TimeoutError : public Error {
public:
    explicit TimeoutError(const std::string& message) : Error("timeout", message) {}
};

} // namespace mcmin
