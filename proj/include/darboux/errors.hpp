#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace darboux {

// Contract violations throw one of the types below.  Outcomes that carry a
// best-effort result (an unreached tolerance, an exhausted cell budget) are
// returned as values by the operations that produce them, except where the
// operation has nothing useful to return; those throw the payload-carrying
// exceptions at the bottom.

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BaseMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MonotonicityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an adaptive search cannot reach its target within the cell
// budget and the operation's result type has no slot for a partial answer.
struct BudgetExceededError : std::runtime_error {
    double best_achieved;
    std::size_t cells_used;

    BudgetExceededError(const std::string& what, double best, std::size_t cells)
        : std::runtime_error(what), best_achieved(best), cells_used(cells) {}
};

// Thrown by constructors that must deliver enclosures of a given width.
struct WidthExceededError : std::runtime_error {
    double best_width;

    WidthExceededError(const std::string& what, double width)
        : std::runtime_error(what), best_width(width) {}
};

} // namespace darboux
