#pragma once

namespace havnfp {

// All floating-point comparisons in the solver go through these constants.

/// Absolute slack on resource comparisons (capacity, reservation, residual).
inline constexpr double kCapacityEps = 1e-9;

/// Two availabilities closer than this are a tie (worst-request set, improvement rule).
inline constexpr double kAvailabilityEps = 1e-12;

/// Allowed deviation of a request's fraction sum from 1.
inline constexpr double kFractionEps = 1e-9;

}  // namespace havnfp
