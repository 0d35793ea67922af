#pragma once

#include <stdexcept>
#include <string>

namespace tightspan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A job has no machine with processing time <= T; the assignment LP is
// trivially infeasible.
struct NoLegalMachine : Error {
    int job;
    explicit NoLegalMachine(int j)
        : Error("job " + std::to_string(j + 1) + " has no legal machine under the makespan threshold"),
          job(j) {}
};

struct IterationLimit : Error {
    using Error::Error;
};

struct NoPerfectMatching : Error {
    using Error::Error;
};

struct NoSaturatingMatching : Error {
    using Error::Error;
};

struct EmptyBadMachine : Error {
    int machine;
    explicit EmptyBadMachine(int i)
        : Error("overloaded machine " + std::to_string(i + 1) + " carries no jobs; solver state is corrupt"),
          machine(i) {}
};

struct IllegalTransfer : Error {
    using Error::Error;
};

// The saturating matching between overloaded and lightly loaded machines
// failed even though the counting argument guarantees it. Hard error.
struct MatchingFailure : Error {
    using Error::Error;
};

struct IllegalPush : Error {
    using Error::Error;
};

struct MoveLimitExceeded : Error {
    using Error::Error;
};

struct LimitExceeded : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::string location;
    ParseError(std::string where, const std::string& what)
        : Error(where + ": " + what), location(std::move(where)) {}
};

}  // namespace tightspan
