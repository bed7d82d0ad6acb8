#pragma once

#include <stdexcept>
#include <string>

namespace arcspect {

/// Base of every error raised by the library. `exit_code()` is what the CLI
/// returns when the error escapes a command: 1 for domain/input problems,
/// 2 for numerical convergence failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept = 0;
    virtual int exit_code() const noexcept { return 1; }
};

#define ARCSPECT_ERROR(Name, Code)                                             \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(what) {}                \
        const char* kind() const noexcept override { return #Name; }           \
        int exit_code() const noexcept override { return Code; }               \
    };

ARCSPECT_ERROR(DomainError, 1)
ARCSPECT_ERROR(OverflowError, 1)
ARCSPECT_ERROR(GridMismatch, 1)
ARCSPECT_ERROR(PairingError, 1)
ARCSPECT_ERROR(DisjointSupport, 1)
ARCSPECT_ERROR(EmptyBand, 1)
ARCSPECT_ERROR(NormalizationError, 1)
ARCSPECT_ERROR(DegenerateCNorm, 1)
ARCSPECT_ERROR(AssumptionViolated, 1)
ARCSPECT_ERROR(NoArc, 1)
ARCSPECT_ERROR(ConfigError, 1)
ARCSPECT_ERROR(ConvergenceError, 2)
ARCSPECT_ERROR(LinAlgError, 2)
ARCSPECT_ERROR(NotConverged, 2)
ARCSPECT_ERROR(NoResonance, 2)
ARCSPECT_ERROR(TrackingLost, 2)

#undef ARCSPECT_ERROR

}  // namespace arcspect
