#pragma once

#include <stdexcept>
#include <string>

namespace rodsim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (shape, range, orthogonality).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Drill-free map requested for (nearly) antipodal directors.
class SingularDrillFreeMap : public Error {
public:
    using Error::Error;
};

// split() called with an operator that does not carry source onto target.
class NotASplittingMap : public Error {
public:
    using Error::Error;
};

// Zero tangent where the centerline must be regular.
class RegularityError : public Error {
public:
    using Error::Error;
};

// KKT matrix of the constrained solver could not be factorized.
class SingularKKT : public Error {
public:
    SingularKKT(const std::string& what, int positive, int negative, int zero)
        : Error(what), positive_(positive), negative_(negative), zero_(zero) {}

    int positive() const { return positive_; }
    int negative() const { return negative_; }
    int zero() const { return zero_; }

private:
    int positive_, negative_, zero_;
};

// Continuation found no stability loss in the requested load range.
class NotDetected : public Error {
public:
    using Error::Error;
};

// A time step's Newton loop failed; the caller should reduce dt.
class StepNonConvergence : public Error {
public:
    using Error::Error;
};

}  // namespace rodsim
