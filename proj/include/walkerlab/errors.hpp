#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace walkerlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. offset is a byte offset into the input.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(std::size_t offset, std::string name);
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// log of a non-positive number, division by zero, ...
class DomainError : public Error {
public:
    using Error::Error;
};

class OrderError : public Error {
public:
    using Error::Error;
};

class SingularPointError : public Error {
public:
    SingularPointError(std::string factor, const std::string& what)
        : Error(what), factor_(std::move(factor)) {}
    const std::string& factor() const { return factor_; }

private:
    std::string factor_;
};

class NormalFormError : public Error {
public:
    NormalFormError(std::string symbol, const std::string& what)
        : Error(what), symbol_(std::move(symbol)) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

/// A constructor refused its input (hypothesis of the construction violated).
class RejectedError : public Error {
public:
    using Error::Error;
};

/// Two independent routes to the same tensor disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

class ScenarioError : public Error {
public:
    using Error::Error;
};

} // namespace walkerlab
