#ifndef HUEMODEL_ERROR_HPP
#define HUEMODEL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace huemodel {

/// Malformed argument to a library call (bad kernel size, mismatched planes, ...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or undecodable input, unwritable output, malformed config.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside an experiment (degenerate map, singular fit).
class ExperimentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularFitError : public ExperimentError {
public:
  using ExperimentError::ExperimentError;
};

} // namespace huemodel

#endif
