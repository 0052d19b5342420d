#pragma once

#include <stdexcept>
#include <string>

namespace kaonpair {

/// Argument outside the mathematical domain of an operation (negative time, t2 < t1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Unknown decay channel id.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Stationary states or a filtering pair that fail to span the single-kaon space.
class DegenerateBasisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside the event generator (envelope violation, exhausted attempt budget).
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kaonpair
