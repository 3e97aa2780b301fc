#pragma once

#include <stdexcept>
#include <string>

namespace biglide {

// Base class for every failure the toolkit reports. Each derived type names
// the contract that was violated, so callers can catch precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numerics
struct NotSymmetric : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct MassNotPositiveDefinite : Error { using Error::Error; };

// mechanism
struct EmptyWorkspace : Error { using Error::Error; };
struct OutOfWorkspace : Error { using Error::Error; };
struct SingularPosture : Error { using Error::Error; };

// vjm
struct SingularBorderedSystem : Error { using Error::Error; };

// beam
struct NonPositiveCompliance : Error { using Error::Error; };
struct InvalidAlpha : Error { using Error::Error; };

// modal
struct InvalidElementCount : Error { using Error::Error; };
struct InconsistentTopology : Error { using Error::Error; };
struct NoDynamicDOF : Error { using Error::Error; };

// dataset / io
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace biglide
