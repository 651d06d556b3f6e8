#ifndef NEWSGRAVITY_ERRORS_HPP
#define NEWSGRAVITY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace newsgravity {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// A date falls before the window start or after its last week.
class OutOfWindowError : public Error {
public:
  using Error::Error;
};

class EmptyCountrySetError : public Error {
public:
  using Error::Error;
};

class UnknownCountryError : public Error {
public:
  using Error::Error;
};

/// A country or dyad required by the design is missing from the tables.
class MissingCovariateError : public Error {
public:
  using Error::Error;
};

/// A covariate that feeds a log transform is zero or negative.
class NonpositiveCovariateError : public Error {
public:
  using Error::Error;
};

/// The persistence indicator has no defined lag at week 0.
class FirstWeekUndefinedError : public Error {
public:
  using Error::Error;
};

class InvalidDesignError : public Error {
public:
  using Error::Error;
};

/// The weighted normal system is rank deficient; the message names the column.
class SingularSystemError : public Error {
public:
  using Error::Error;
};

class NoZerosError : public Error {
public:
  using Error::Error;
};

class NullModelOnlyError : public Error {
public:
  using Error::Error;
};

class AllZeroPredictionError : public Error {
public:
  using Error::Error;
};

/// A matrix column has zero variance, so standardization is undefined.
class DegenerateMatrixError : public Error {
public:
  using Error::Error;
};

/// An analysis step needs a fit that has not been produced yet.
class MissingFitError : public Error {
public:
  using Error::Error;
};

}  // namespace newsgravity

#endif
