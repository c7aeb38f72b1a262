#ifndef POINTNLS_DEFAULTS_HPP
#define POINTNLS_DEFAULTS_HPP

namespace pointnls::defaults {

// Single source of truth for the physical defaults used by the CLI and the
// verification runs.

inline constexpr double kHalfWidth = 20.0;  // box [-L, L)
inline constexpr int kOneBodyPoints = 1024; // one-body grid size M
inline constexpr double kMu = 1.0;          // defocusing coupling strength
inline constexpr double kSigma = 1.0;       // Gaussian datum width
inline constexpr double kDt = 1e-3;         // split-step size for T <= 5
inline constexpr double kChargeStep = 1e-3; // Abel-Volterra mesh
inline constexpr double kEps = 0.5;         // bump width
inline constexpr double kHorizon = 1.0;     // default T

// Many-body tensor grids.
inline constexpr int kManyBodyPointsN23 = 64;  // N = 2, 3
inline constexpr int kManyBodyPointsN4 = 32;   // N = 4

}  // namespace pointnls::defaults

#endif
