#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

// Bad input: malformed files, parameters out of range, windows too small.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that started from valid input failed to meet its accuracy
// contract (quadrature did not converge, kernel denominator vanished, ...).
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg, double estimate = 0.0)
        : std::runtime_error(msg), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

}  // namespace dirac
