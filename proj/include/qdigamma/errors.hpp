#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdigamma {

/// Argument or parameter outside the admissible domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The certified series majorant could not reach the requested tolerance
/// within the configured term cap. Carries the best bound that was reached.
class TruncationNotConverged : public std::runtime_error {
public:
    TruncationNotConverged(const std::string& what, double best_bound, std::size_t terms)
        : std::runtime_error(what), best_bound_(best_bound), terms_(terms) {}

    double best_bound() const noexcept { return best_bound_; }
    std::size_t terms() const noexcept { return terms_; }

private:
    double best_bound_;
    std::size_t terms_;
};

/// A digamma value entering a ratio or cross expression is not certifiably positive.
class PositivityViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Threshold search found the function already positive at the argument floor.
class NoRootInBracket : public std::runtime_error {
public:
    NoRootInBracket(const std::string& what, double floor)
        : std::runtime_error(what), floor_(floor) {}

    double floor() const noexcept { return floor_; }

private:
    double floor_;
};

/// The digamma function never becomes positive (e.g. the (p,q) family at p = 1).
class NoPositiveRegion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qdigamma
