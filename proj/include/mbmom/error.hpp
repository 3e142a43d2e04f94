#ifndef MBMOM_ERROR_HPP
#define MBMOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mbmom {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MBMOM_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what) : Error(what) {}    \
    }

// core-model
MBMOM_DEFINE_ERROR(InvalidModel);
MBMOM_DEFINE_ERROR(NonPositiveScale);
MBMOM_DEFINE_ERROR(ParseError);

// exact-linalg
MBMOM_DEFINE_ERROR(DimensionMismatch);
MBMOM_DEFINE_ERROR(SingularMatrix);
MBMOM_DEFINE_ERROR(RankDeficientPool);
MBMOM_DEFINE_ERROR(InconsistentPool);

// oracles
MBMOM_DEFINE_ERROR(StateSpaceTooLarge);
MBMOM_DEFINE_ERROR(LatticeTooLarge);

// equations
MBMOM_DEFINE_ERROR(QueueAbsent);
MBMOM_DEFINE_ERROR(NotLeaf);

// solvers
MBMOM_DEFINE_ERROR(LayoutMismatch);
MBMOM_DEFINE_ERROR(SingularStep);
MBMOM_DEFINE_ERROR(MissingChildValue);

// metrics
MBMOM_DEFINE_ERROR(DegenerateModel);
MBMOM_DEFINE_ERROR(ReplicatedQueuesUnsupported);
MBMOM_DEFINE_ERROR(InfeasibleState);

// costmodel
MBMOM_DEFINE_ERROR(UnsupportedB);

#undef MBMOM_DEFINE_ERROR

}  // namespace mbmom

#endif  // MBMOM_ERROR_HPP
