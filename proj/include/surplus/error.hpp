#pragma once

#include <stdexcept>
#include <string>

namespace surplus {

/// Base of every error thrown by the library. `kind()` names the failure
/// class so CLI reports and tests can match on it without RTTI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SURPLUS_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

// lp
SURPLUS_DEFINE_ERROR(MalformedProgram);
SURPLUS_DEFINE_ERROR(SolverFailure);
// geometry
SURPLUS_DEFINE_ERROR(EmptySet);
SURPLUS_DEFINE_ERROR(IndexOutOfRange);
SURPLUS_DEFINE_ERROR(NotSupporting);
SURPLUS_DEFINE_ERROR(NotExtreme);
SURPLUS_DEFINE_ERROR(ChainStalled);
SURPLUS_DEFINE_ERROR(InvalidBelief);
// models
SURPLUS_DEFINE_ERROR(DomainError);
SURPLUS_DEFINE_ERROR(OutOfSimplex);
SURPLUS_DEFINE_ERROR(InvalidModel);
// extraction
SURPLUS_DEFINE_ERROR(NotAllDetectable);
SURPLUS_DEFINE_ERROR(NotEventuallyDetectable);
SURPLUS_DEFINE_ERROR(BudgetInfeasible);
SURPLUS_DEFINE_ERROR(InputMenuFails);
// duality
SURPLUS_DEFINE_ERROR(DegenerateDual);
// cli
SURPLUS_DEFINE_ERROR(ConfigError);
SURPLUS_DEFINE_ERROR(MissingResults);

#undef SURPLUS_DEFINE_ERROR

}  // namespace surplus
