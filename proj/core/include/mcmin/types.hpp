#pragma once

#include <cstdint>

namespace mcmin {

using state_t = std::int32_t;
using label_t = std::int32_t;

/// Row-sum validation tolerance (|sum - 1| <= tol for a distribution).
inline constexpr double kTolStochastic = 1e-9;

/// Equality tolerance used by exact bisimulation on floating-point input.
/// The underlying theory assumes exact arithmetic; perturbed inputs make
/// bit-equality meaningless, so "equal" means within this per-coordinate
/// tolerance.
inline constexpr double kTolExact = 1e-9;

} // namespace mcmin
