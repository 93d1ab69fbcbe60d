#pragma once

#include <stdexcept>
#include <string>

namespace drg {

/// Root of every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (e.g. a non-symmetric matrix).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Malformed graph or parameter file; `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Well-formed input that does not describe a simple connected graph.
class GraphError : public ParseError {
public:
    using ParseError::ParseError;
};

class NotDistanceRegular : public Error {
public:
    using Error::Error;
};

/// Distance-regular, but outside the analysed range (diameter or valency below 3).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotQPolynomial : public Error {
public:
    using Error::Error;
};

/// Two computations that must agree did not.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

class DecompositionError : public Error {
public:
    using Error::Error;
};

/// Exact arithmetic cannot proceed because a needed quantity is irrational.
class IrrationalValue : public Error {
public:
    using Error::Error;
};

/// Parameter array rejected by validation; `index` is the offending position or -1.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, int index = -1) : Error(what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

/// Two closed forms for the same derived scalar disagree.
class FormulaMismatch : public Error {
public:
    using Error::Error;
};

/// Data that does not fit a parameter family; `index` is the first failing position or -1.
class NotOfType : public Error {
public:
    NotOfType(const std::string& what, int index = -1) : Error(what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

}  // namespace drg
