#pragma once

#include <array>
#include <cstddef>

// Embedded critical-value tables. Nothing here is estimated at run time; the
// library carries its own tables so results are reproducible offline.

namespace fiscast::critical_values {

// ----------------------------------------------------------------------------
// Dickey-Fuller tau distribution, MacKinnon (2010) response surfaces:
// cv(T) = b0 + b1/T + b2/T^2 + b3/T^3, rows ordered 1%, 5%, 10%.
// ----------------------------------------------------------------------------

using ResponseSurface = std::array<std::array<double, 4>, 3>;

inline constexpr ResponseSurface kTauNone = {{
    {-2.56574, -2.2358, -3.627, 0.0},
    {-1.94100, -0.2686, -3.365, 31.223},
    {-1.61682, 0.2656, -2.714, 25.364},
}};

inline constexpr ResponseSurface kTauConstant = {{
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
}};

inline constexpr ResponseSurface kTauConstantTrend = {{
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
}};

/// Evaluates a response surface at effective sample size n.
/// level_index: 0 = 1%, 1 = 5%, 2 = 10%.
inline constexpr double dickey_fuller_cv(const ResponseSurface& table, std::size_t level_index,
                                         double n) {
    const auto& b = table[level_index];
    return b[0] + b[1] / n + b[2] / (n * n) + b[3] / (n * n * n);
}

// ----------------------------------------------------------------------------
// KPSS (1992), Table 1. Right-tail points; rows ordered 1%, 5%, 10%.
// ----------------------------------------------------------------------------

inline constexpr std::array<double, 3> kKpssConstant = {0.739, 0.463, 0.347};
inline constexpr std::array<double, 3> kKpssTrend = {0.216, 0.146, 0.119};

// ----------------------------------------------------------------------------
// Johansen max-eigenvalue statistic, unrestricted-constant case
// (Osterwald-Lenum-style tables as distributed with common econometric
// packages). Indexed by the number of common trends under the null
// (m - r = 1..5); columns 90%, 95%, 99%.
// ----------------------------------------------------------------------------

inline constexpr std::size_t kJohansenMaxDim = 5;

inline constexpr std::array<std::array<double, 3>, kJohansenMaxDim> kJohansenMaxEigen = {{
    {2.7055, 3.8415, 6.6349},
    {12.2971, 14.2639, 18.5200},
    {18.8928, 21.1314, 25.8650},
    {25.1236, 27.5858, 32.7172},
    {31.2379, 33.8777, 39.3693},
}};

}  // namespace fiscast::critical_values
