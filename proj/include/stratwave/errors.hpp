#pragma once

#include <stdexcept>
#include <string>

namespace stratwave {

// Error taxonomy. Every failure mode of the library maps to one of these,
// and the C API maps each type to a stable error code.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* name() const noexcept { return "Error"; }
};

#define STRATWAVE_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                                   \
        explicit Name(const std::string& what) : Error(what) {}             \
        const char* name() const noexcept override { return #Name; }        \
    }

STRATWAVE_DEFINE_ERROR(ParityViolation);
STRATWAVE_DEFINE_ERROR(ResolutionMismatch);
STRATWAVE_DEFINE_ERROR(ZeroMode);
STRATWAVE_DEFINE_ERROR(DomainError);
STRATWAVE_DEFINE_ERROR(InadmissibleMode);
STRATWAVE_DEFINE_ERROR(NonpositiveTheta);
STRATWAVE_DEFINE_ERROR(IncompatibleRHS);
STRATWAVE_DEFINE_ERROR(NoConvergence);
STRATWAVE_DEFINE_ERROR(DivergenceViolation);
STRATWAVE_DEFINE_ERROR(StabilityGuard);
STRATWAVE_DEFINE_ERROR(IoError);

#undef STRATWAVE_DEFINE_ERROR

}  // namespace stratwave
