#ifndef MLCALC_ERRORS_HPP
#define MLCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlcalc {

/// Base class for all mlcalc errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MLCALC_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
    }

MLCALC_DEFINE_ERROR(NonConvergent);
MLCALC_DEFINE_ERROR(QuadratureFailure);
MLCALC_DEFINE_ERROR(BetaOutOfRange);
MLCALC_DEFINE_ERROR(DimMismatch);
MLCALC_DEFINE_ERROR(DegreeMismatch);
MLCALC_DEFINE_ERROR(BetaMismatch);
MLCALC_DEFINE_ERROR(DegreeOverflow);
MLCALC_DEFINE_ERROR(TruncationOverflow);
MLCALC_DEFINE_ERROR(BasisMismatch);
MLCALC_DEFINE_ERROR(OutsideDomain);
MLCALC_DEFINE_ERROR(InvalidArgument);

#undef MLCALC_DEFINE_ERROR

} // namespace mlcalc

#endif
