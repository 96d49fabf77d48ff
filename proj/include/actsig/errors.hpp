#pragma once

#include <stdexcept>
#include <string>

namespace actsig {

// Base for every library failure. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ACTSIG_DEFINE_ERROR(Name)                \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    };

ACTSIG_DEFINE_ERROR(ParseError)
ACTSIG_DEFINE_ERROR(ShapeError)
ACTSIG_DEFINE_ERROR(ValueError)
ACTSIG_DEFINE_ERROR(IoError)
ACTSIG_DEFINE_ERROR(IndexError)
ACTSIG_DEFINE_ERROR(BoundsError)
ACTSIG_DEFINE_ERROR(DomainError)
ACTSIG_DEFINE_ERROR(NonConvergence)
ACTSIG_DEFINE_ERROR(UnsupportedActivation)
ACTSIG_DEFINE_ERROR(EmptySetError)
ACTSIG_DEFINE_ERROR(FamilyMismatch)
ACTSIG_DEFINE_ERROR(EmptyMatrix)
ACTSIG_DEFINE_ERROR(EmptyMatching)
ACTSIG_DEFINE_ERROR(DegenerateData)

#undef ACTSIG_DEFINE_ERROR

} // namespace actsig
