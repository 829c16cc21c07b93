#pragma once

#include <stdexcept>
#include <string>

namespace overlap_lab {

// Numerical failures map to CLI exit code 3; bad arguments map to exit code 2.

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSpectrum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PoleSingularity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonPositiveArgument : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class EmptyInput : public ParameterError {
public:
    using ParameterError::ParameterError;
};

} // namespace overlap_lab
