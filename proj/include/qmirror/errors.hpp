#pragma once
#include <stdexcept>
#include <string>

namespace qm {

// Base class for all domain errors raised by the library.
struct QmError : std::runtime_error {
    explicit QmError(const std::string& what) : std::runtime_error(what) {}
};

#define QM_DEFINE_ERROR(Name)                                            \
    struct Name : QmError {                                              \
        explicit Name(const std::string& what) : QmError(#Name ": " + what) {} \
    }

QM_DEFINE_ERROR(NonPalindromic);
QM_DEFINE_ERROR(NotInBasis);
QM_DEFINE_ERROR(GradingMismatch);
QM_DEFINE_ERROR(ConventionViolated);
QM_DEFINE_ERROR(SingularFan);
QM_DEFINE_ERROR(DegenerateGrading);
QM_DEFINE_ERROR(NoConvergence);
QM_DEFINE_ERROR(RootMismatch);
QM_DEFINE_ERROR(LeadingTermBroken);
QM_DEFINE_ERROR(BadLeadingTerm);
QM_DEFINE_ERROR(WrongOrder);
QM_DEFINE_ERROR(ZeroSeries);
QM_DEFINE_ERROR(AlphaVanishes);
QM_DEFINE_ERROR(BadShape);
QM_DEFINE_ERROR(BudgetExceeded);
QM_DEFINE_ERROR(SingularSystem);
QM_DEFINE_ERROR(UnsupportedProfile);
QM_DEFINE_ERROR(MissingData);
QM_DEFINE_ERROR(XWindowOverflow);

#undef QM_DEFINE_ERROR

}  // namespace qm
