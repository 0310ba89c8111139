// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace freelab {

/// Base class for every error raised by the library. Each subclass maps to a
/// distinct process exit code in the lab CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

class InvalidInput : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Iterative method failed. Carries the last estimate and its residual.
class NumericFailure : public Error {
public:
    NumericFailure(const std::string& what, double last_value = 0.0, double residual = 0.0)
        : Error(what), last_value_(last_value), residual_(residual) {}
    int exit_code() const noexcept override { return 4; }
    double last_value() const noexcept { return last_value_; }
    double residual() const noexcept { return residual_; }

private:
    double last_value_;
    double residual_;
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 5; }
};

}  // namespace freelab
