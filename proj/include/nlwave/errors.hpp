#pragma once

#include <stdexcept>
#include <string>

namespace nlwave {

/// Base of every library error. `exit_code()` follows the CLI contract:
/// 1 for numerical or quality failures, 2 for usage and configuration errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
    virtual const char* kind() const noexcept = 0;
};

class NumericalError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numerical"; }
};

class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
    const char* kind() const noexcept override { return "usage"; }
};

#define NLWAVE_ERROR(Name, Base, Kind)                                     \
    class Name : public Base {                                             \
    public:                                                                \
        using Base::Base;                                                  \
        const char* kind() const noexcept override { return Kind; }        \
    };

NLWAVE_ERROR(HypothesisError, NumericalError, "hypothesis")
NLWAVE_ERROR(DivergenceError, NumericalError, "divergence")
NLWAVE_ERROR(TransformDivergence, NumericalError, "transform-divergence")
NLWAVE_ERROR(ContourError, NumericalError, "contour")
NLWAVE_ERROR(AccuracyError, NumericalError, "accuracy")
NLWAVE_ERROR(HyperbolicityError, NumericalError, "hyperbolicity")
NLWAVE_ERROR(WindowError, NumericalError, "window")
NLWAVE_ERROR(ResolutionError, NumericalError, "resolution")
NLWAVE_ERROR(PerturbationTooLarge, NumericalError, "perturbation-too-large")
NLWAVE_ERROR(ConvergenceError, NumericalError, "convergence")
NLWAVE_ERROR(MonotonicityError, NumericalError, "monotonicity")
NLWAVE_ERROR(FitError, NumericalError, "fit-quality")
NLWAVE_ERROR(UnderflowWindowError, NumericalError, "underflow-window")
NLWAVE_ERROR(EigenError, NumericalError, "eigensolver")

NLWAVE_ERROR(GridError, UsageError, "grid")
NLWAVE_ERROR(SizeError, UsageError, "size")
NLWAVE_ERROR(CatalogError, UsageError, "catalog")
NLWAVE_ERROR(SpecError, UsageError, "spec")
NLWAVE_ERROR(ParseError, UsageError, "parse")
NLWAVE_ERROR(ConfigError, UsageError, "config")

#undef NLWAVE_ERROR

}  // namespace nlwave
