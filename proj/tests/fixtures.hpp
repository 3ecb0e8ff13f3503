#pragma once

namespace testing {

// Dense-oracle fit at n = 32, 200 stream-function samples, seed 7
// (tools/stokes_fixture).
inline constexpr double kDenseBetaHat32 = 0.026898182501676974;

// Exact strip ratios at s = 0.1 from tools/oracles/n2d_fixtures.py.
inline constexpr double kLinearRatio32 = 390.0 / 199.0;
inline constexpr double kQuadRatio32 = 76387.0 / 45079.0;
inline constexpr double kLinearRatio64 = 1486.0 / 753.0;
inline constexpr double kQuadRatio64 = 1174030.0 / 691469.0;

}  // namespace testing
