#pragma once

#include <stdexcept>
#include <string>

namespace dclunie {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact arithmetic failure (division by zero in the coefficient field or a series).
class ArithmeticError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Input parsed but does not have the H*P = Q shape (non-homogeneous P, shifted w on the
// right-hand side, ...).
class NormalizeError : public Error {
public:
    using Error::Error;
};

// Shape outside what an algorithm supports (non-linear top shift, shifts other than
// -1/0/+1, expansion through a non-constant opaque symbol, ...).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace dclunie
