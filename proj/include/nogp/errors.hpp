#pragma once

#include <stdexcept>
#include <string>

namespace nogp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error {
    using Error::Error;
};
struct NonHermitianSample : Error {
    using Error::Error;
};
struct DegenerateClustering : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};
struct GridTooCoarse : Error {
    using Error::Error;
};
struct NotUnitary : Error {
    using Error::Error;
};
struct NotClosed : Error {
    using Error::Error;
};
struct NotClosedBase : Error {
    using Error::Error;
};
struct NotCyclicSubspace : Error {
    using Error::Error;
};
struct ToleranceNotMet : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace nogp
