#pragma once

#include <stdexcept>
#include <string>

namespace cvplan {

// All library errors derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class NotDivisible : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

class InvalidRho : public Error {
public:
    using Error::Error;
};

class InvalidPi : public Error {
public:
    using Error::Error;
};

class InvalidR : public Error {
public:
    using Error::Error;
};

class InvalidJ : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class SingularDesign : public Error {
public:
    using Error::Error;
};

class Separation : public Error {
public:
    using Error::Error;
};

class NoVariation : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace cvplan
