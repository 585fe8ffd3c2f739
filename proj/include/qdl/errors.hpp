#pragma once

#include <stdexcept>
#include <string>

namespace qdl {

// All library failures derive from Error; the CLI maps the subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Thrown at s = 1 by the zeta evaluators; carries the Laurent data of zeta there.
class PoleError : public DomainError {
public:
    explicit PoleError(const std::string& what, double residue = 1.0,
                       double constant = 0.57721566490153286061)
        : DomainError(what), residue_(residue), constant_(constant) {}
    double residue() const noexcept { return residue_; }
    double constant() const noexcept { return constant_; }

private:
    double residue_;
    double constant_;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class DataQualityError : public Error {
public:
    using Error::Error;
};

}  // namespace qdl
