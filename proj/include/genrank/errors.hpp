// Error taxonomy. Everything user-recoverable is an exception with a message
// naming the offending quantity; the CLI maps these onto exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace genrank {

// Dimension disagreements (column-count mismatch in a Khatri-Rao product,
// |I| != |J| minors, inconsistent network shapes).
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid values (non-finite entries on the float path).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A subset-enumeration budget was exceeded; the message names the count.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Infeasible requests (transversal size, d not dividing n, odd widths).
struct ConstraintError : std::invalid_argument {
    explicit ConstraintError(const std::string& what) : std::invalid_argument(what) {}
};

// A coefficient stream ran out before the truncation-degree target was met.
struct InsufficientSupportError : std::runtime_error {
    explicit InsufficientSupportError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace genrank
