#pragma once

#include <stdexcept>
#include <string>

namespace varlex {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A structural object (partition, transport map, rectangle) is malformed.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Input text could not be parsed into the expected schema.
class ParseError : public Error {
public:
  using Error::Error;
};

/// The ratio condition p*(t)/ln(e/t) >= d has no witness on the grid.
class NotWitnessedError : public Error {
public:
  using Error::Error;
};

/// Not enough mass of c^h on the grid to form a single unit band.
class GridTooShallowError : public Error {
public:
  using Error::Error;
};

/// A construction invariant failed; indicates a discretization bug.
class InvariantError : public Error {
public:
  using Error::Error;
};

/// A dyadic level exceeds the available bit budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

} // namespace varlex
