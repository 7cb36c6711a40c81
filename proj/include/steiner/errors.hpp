#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

// Base class for all faults raised by this library. Non-fault results
// (infeasible problems, failed checks) are expressed as return values.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural rule on a type or operation input was violated.
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg) : Error("invariant violation: " + msg) {}
};

// An edge required by the computation is not present in the graph.
struct AbsentEdgeError : Error {
    explicit AbsentEdgeError(const std::string& msg) : Error("absent edge: " + msg) {}
};

// A rooted-tree operation was applied to an unrooted tree.
struct NotRootedError : Error {
    explicit NotRootedError(const std::string& msg) : Error("not rooted: " + msg) {}
};

// Integer range exceeded; the instance must be rescaled.
struct OverflowError : Error {
    explicit OverflowError(const std::string& msg) : Error("overflow: " + msg) {}
};

// The operation requires a larger input than supplied (e.g. too few terminals).
struct TrivialInstanceError : Error {
    explicit TrivialInstanceError(const std::string& msg) : Error("trivial instance: " + msg) {}
};

// Lifting a reduced solution found the added root with degree != 1.
struct RootDegreeViolation : Error {
    explicit RootDegreeViolation(const std::string& msg) : Error("root degree violation: " + msg) {}
};

// A witness transform needed an internal node but the tree has none.
struct NoInternalNodeError : Error {
    explicit NoInternalNodeError(const std::string& msg) : Error("no internal node: " + msg) {}
};

// Deleting helper vertices disconnected the witness tree.
struct DisconnectedError : Error {
    explicit DisconnectedError(const std::string& msg) : Error("disconnected: " + msg) {}
};

// An enumeration hit its vertex/tree/time budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error("budget exceeded: " + msg) {}
};

// A configured size/work cap was exceeded (table dimensions, op counts, ...).
struct CapExceeded : Error {
    explicit CapExceeded(const std::string& msg) : Error("cap exceeded: " + msg) {}
};

// Internal bookkeeping disagreed with itself; always a bug, never an input error.
struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& msg) : Error("internal inconsistency: " + msg) {}
};

// Input file / JSON could not be parsed into an instance.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

// Geometric construction got a zero-length segment.
struct DegenerateSegment : Error {
    explicit DegenerateSegment(const std::string& msg) : Error("degenerate segment: " + msg) {}
};

}  // namespace steiner
