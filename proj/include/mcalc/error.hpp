#pragma once

#include <stdexcept>
#include <string>

namespace mcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- expressions

class ShapeMismatch : public Error {
public:
    ShapeMismatch(std::string path, std::string expected, std::string found)
        : Error("shape mismatch at " + path + ": expected " + expected + ", found " + found),
          path_(std::move(path)), expected_(std::move(expected)), found_(std::move(found)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::string path_, expected_, found_;
};

class NonSquare : public Error {
public:
    explicit NonSquare(std::string path)
        : Error("non-square operand at " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, std::string expected)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": expected " + expected),
          line_(line), col_(col), expected_(std::move(expected)) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    int line_, col_;
    std::string expected_;
};

class UnknownSymbol : public Error {
public:
    explicit UnknownSymbol(const std::string& name) : Error("unknown symbol '" + name + "'") {}
};

class UnboundSymbol : public Error {
public:
    explicit UnboundSymbol(const std::string& name)
        : Error("symbol '" + name + "' is not bound in the environment") {}
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NonPositiveDeterminant : public Error {
public:
    using Error::Error;
};

// ------------------------------------------------------------ differentiation

class UnsupportedNode : public Error {
public:
    using Error::Error;
};

class NotReducible : public Error {
public:
    using Error::Error;
};

// -------------------------------------------------------------------- opcalc

class SignatureMismatch : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class UnboundFunction : public Error {
public:
    explicit UnboundFunction(const std::string& name)
        : Error("function symbol '" + name + "' has no binding") {}
};

// ------------------------------------------------------------------ numerics

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

}  // namespace mcalc
