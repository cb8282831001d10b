// Error taxonomy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace lqdepth {

/// Base class for all failures raised by this library.
struct DepthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A covariance (or other matrix required to be SPD) is not positive definite.
struct SingularCovariance : DepthError {
    using DepthError::DepthError;
};

/// A matrix expected to have full row rank does not.
struct RankDeficient : DepthError {
    using DepthError::DepthError;
};

/// A linear system or program has no solution.
struct Infeasible : DepthError {
    using DepthError::DepthError;
};

/// An internal solver reached an inconsistent or unexpected state.
struct SolverFailure : DepthError {
    using DepthError::DepthError;
};

}  // namespace lqdepth
