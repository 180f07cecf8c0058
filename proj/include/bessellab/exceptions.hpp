#ifndef BESSELLAB_EXCEPTIONS_HPP
#define BESSELLAB_EXCEPTIONS_HPP

#include <stdexcept>
#include <string>

namespace bessellab {

// Input outside the mathematical domain of an operation (divergent integral,
// invalid index combination, nonpositive argument, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An internal structural invariant failed (singular exact solve, inconsistent
// linear system, malformed polynomial).  Indicates a programming error or an
// unsatisfiable reduction, never bad user input.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// The requested precision could not be certified.  The message carries the
// best achieved bound so callers can report partial results.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double achieved_log10_radius)
        : std::runtime_error(what), achieved_log10_radius_(achieved_log10_radius) {}
    double achieved_log10_radius() const { return achieved_log10_radius_; }
private:
    double achieved_log10_radius_;
};

// Index families the reduction algebra deliberately does not cover.
class UnsupportedSubfamilyError : public std::runtime_error {
public:
    explicit UnsupportedSubfamilyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bessellab

#endif
