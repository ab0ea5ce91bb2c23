#pragma once

#include <stdexcept>
#include <string>

namespace qwjoin {

/// Input outside a function's domain (non-periodic support, no PST in the base graph, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A hypothesis of a closed form does not hold (irregular graph, loops under the Laplacian, bad spec).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Overflow, non-convergence, or a degenerate numeric situation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed form and its numeric confirmation disagree.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qwjoin
