#ifndef O2GASKET_ERRORS_HPP
#define O2GASKET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace o2gasket {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// x outside the domain of a special function.
struct DomainError : Error {
    using Error::Error;
};

// An entry of a g sequence is negative or not finite.
struct EntryError : Error {
    using Error::Error;
};

// First moment of g exceeds 1 beyond the allowed tolerance.
struct MomentExcessError : Error {
    MomentExcessError(const std::string& what, double moment)
        : Error(what), first_moment(moment) {}
    double first_moment;
};

// nu collapses to the Dirac mass at zero (or nu(-1) vanishes).
struct DegenerateNuError : Error {
    using Error::Error;
};

// Some nu(k) is negative beyond tolerance; k is the witness.
struct NegativityError : Error {
    NegativityError(const std::string& what, long long k, double v)
        : Error(what), witness_k(k), value(v) {}
    long long witness_k;
    double value;
};

// A truncated series cannot reach the requested tolerance within max_terms.
struct TruncationError : Error {
    using Error::Error;
};

// An operation precondition is violated.
struct PreconditionError : Error {
    using Error::Error;
};

// The ladder-height sampler would drop more mass than allowed.
struct SamplerTruncationError : Error {
    SamplerTruncationError(const std::string& what, double mass)
        : Error(what), truncated_mass(mass) {}
    double truncated_mass;
};

// A formal power series expected to be a probability law misbehaves.
struct SeriesAnomalyError : Error {
    using Error::Error;
};

// Loop-equation convention could not be matched on the reference family.
struct CalibrationError : Error {
    using Error::Error;
};

}  // namespace o2gasket

#endif
