#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Division by an exact zero.
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

// The tower modulus rho^(p^h) - c turned out to be reducible over the
// cyclotomic base: a gcd-based inversion found a proper factor.
struct ZeroDivisor : Error {
    explicit ZeroDivisor(const std::string& msg) : Error(msg) {}
};

struct IncompatibleField : Error {
    explicit IncompatibleField(const std::string& msg) : Error(msg) {}
};

// A denominator could not be recognized as a product of linear factors at
// radical-monomial points, binomials x^m - c, and cyclotomic polynomials.
struct UnsupportedDenominator : Error {
    explicit UnsupportedDenominator(const std::string& msg) : Error(msg) {}
};

struct FactorMismatch : Error {
    explicit FactorMismatch(const std::string& msg) : Error(msg) {}
};

struct TreeNotInSupport : Error {
    explicit TreeNotInSupport(const std::string& msg) : Error(msg) {}
};

// Internal consistency guard: a pole failed to receive a (k,n,i[,l]) address.
struct AddressFailure : Error {
    explicit AddressFailure(const std::string& msg) : Error(msg) {}
};

struct EmptySupport : Error {
    explicit EmptySupport(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct UnsupportedConstruct : Error {
    std::size_t offset;
    UnsupportedConstruct(const std::string& msg, std::size_t off)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

}  // namespace mahler
