#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sqlaser {

// All library errors derive from Error and carry a stable machine-readable
// code. ValidationError means the request itself was ill-posed (bad
// parameters, bad grid, bad config); NumericalError means a well-posed
// request could not be computed reliably. The CLI maps the two families to
// exit codes 1 and 2.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

#define SQLASER_DEFINE_ERROR(NAME, BASE)                                     \
    class NAME final : public BASE {                                         \
    public:                                                                  \
        explicit NAME(const std::string& what) : BASE(#NAME, what) {}        \
    }

SQLASER_DEFINE_ERROR(NonPositiveRate, ValidationError);
SQLASER_DEFINE_ERROR(NoLasing, ValidationError);
SQLASER_DEFINE_ERROR(InvalidParameter, ValidationError);
SQLASER_DEFINE_ERROR(EmptyGrid, ValidationError);
SQLASER_DEFINE_ERROR(PhaseDiffusionDivergence, ValidationError);
SQLASER_DEFINE_ERROR(StepTooLarge, ValidationError);
SQLASER_DEFINE_ERROR(NonIdenticalLasers, ValidationError);
SQLASER_DEFINE_ERROR(NonPositiveInputVariance, ValidationError);
SQLASER_DEFINE_ERROR(ConfigError, ValidationError);

SQLASER_DEFINE_ERROR(SingularSystem, NumericalError);
SQLASER_DEFINE_ERROR(NotPositiveSemidefinite, NumericalError);
SQLASER_DEFINE_ERROR(UnstableDrift, NumericalError);
SQLASER_DEFINE_ERROR(QuadratureNonConvergence, NumericalError);

#undef SQLASER_DEFINE_ERROR

}  // namespace sqlaser
