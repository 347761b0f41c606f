#ifndef FRAISSE_ERRORS_HPP
#define FRAISSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fraisse {

// Base class for all library errors. Operational failures (bad input,
// exceeded search bounds) are exceptions; mathematical refutations are
// reported through PropertyReport verdicts, never thrown.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    using Error::Error;
};
struct InvalidStructure : Error {
    using Error::Error;
};
struct MismatchedEndpoints : Error {
    using Error::Error;
};
struct SizeLimitExceeded : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct PreconditionFailed : Error {
    using Error::Error;
};
struct AmalgamationSearchFailed : Error {
    using Error::Error;
};
struct ExtensionSearchFailed : Error {
    using Error::Error;
};
struct NonInjectiveBond : Error {
    using Error::Error;
};
struct NoPushout : Error {
    using Error::Error;
};
struct UniqueMediatorMissing : Error {
    using Error::Error;
};
struct NoCoherentRetractions : Error {
    using Error::Error;
};
struct IncompleteEnumeration : Error {
    using Error::Error;
};
struct HeightExceeded : Error {
    using Error::Error;
};
struct InsufficientHeadroom : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NotIsometric : Error {
    using Error::Error;
};
struct NotLeftInvertible : Error {
    using Error::Error;
};
struct CoconeMismatch : Error {
    using Error::Error;
};

} // namespace fraisse

#endif
