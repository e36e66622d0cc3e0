#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fmsilp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"
                     : what),
          message_(what), line_(line), column_(column)
    {
    }
    // The message without the position suffix.
    const std::string& message() const { return message_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

class ExpressionEvalError : public Error {
public:
    using Error::Error;
};

class RowBudgetExceeded : public Error {
public:
    explicit RowBudgetExceeded(std::size_t budget)
        : Error("row budget of " + std::to_string(budget) + " rows exceeded"), budget_(budget)
    {
    }
    std::size_t budget() const { return budget_; }

private:
    std::size_t budget_;
};

class NotEliminable : public Error {
public:
    using Error::Error;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class EmptyInterval : public Error {
public:
    using Error::Error;
};

class DualInfeasible : public Error {
public:
    using Error::Error;
};

}  // namespace fmsilp
