#pragma once

#include <stdexcept>
#include <string>

namespace qexact {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QEXACT_ERROR(Name)                                                   \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& detail = "") : Error(#Name, detail) {} \
    };

QEXACT_ERROR(ZeroDenominator)
QEXACT_ERROR(ZeroDenominatorAfterSubstitution)
QEXACT_ERROR(NotDivisible)
QEXACT_ERROR(ParseError)
QEXACT_ERROR(SchemaError)
QEXACT_ERROR(OutOfBound)
QEXACT_ERROR(ShapeMismatch)
QEXACT_ERROR(NotPositiveDefinite)
QEXACT_ERROR(PlusSpaceViolation)
QEXACT_ERROR(NotEigenFamily)
QEXACT_ERROR(MissingEigenvalue)
QEXACT_ERROR(ConstraintViolated)
QEXACT_ERROR(NotInvertible)
QEXACT_ERROR(SingularSystem)
QEXACT_ERROR(DegenerateRoots)
QEXACT_ERROR(ZeroEulerFactor)
QEXACT_ERROR(HypothesisViolated)
QEXACT_ERROR(PoleAtS)
QEXACT_ERROR(NotFundamental)
QEXACT_ERROR(NotAUnit)
QEXACT_ERROR(InsufficientExponentPrecision)
QEXACT_ERROR(NoConvergence)
QEXACT_ERROR(MissingThetaCoefficient)
QEXACT_ERROR(PrecisionMismatch)
QEXACT_ERROR(UnknownSuite)
QEXACT_ERROR(BadParams)
QEXACT_ERROR(IoError)

#undef QEXACT_ERROR

}  // namespace qexact
