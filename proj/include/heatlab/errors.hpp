#ifndef HEATLAB_ERRORS_HPP
#define HEATLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heatlab {

// All domain errors derive from Error so callers can catch the library's
// failures in one place. Each type corresponds to one precondition.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveTime : Error {
    explicit NonPositiveTime(double t)
        : Error("diffusion time must be > 0, got " + std::to_string(t)) {}
};

struct ToleranceTooTight : Error {
    using Error::Error;
};

struct InvalidWindow : Error {
    using Error::Error;
};

struct InvalidDelta : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct NonPositiveWeight : Error {
    using Error::Error;
};

struct InvalidExponent : Error {
    using Error::Error;
};

struct NotTorusGrid : Error {
    using Error::Error;
};

struct SupportTooCloseToBoundary : Error {
    using Error::Error;
};

struct EmptyBall : Error {
    using Error::Error;
};

struct DivergentIntegral : Error {
    using Error::Error;
};

}  // namespace heatlab

#endif
