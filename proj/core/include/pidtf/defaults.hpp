#pragma once

#include <array>
#include <cstdint>

namespace pidtf::defaults {

// Protocol constants. The CLI and Hyperparams defaults are built from these;
// changing one here changes it everywhere.
inline constexpr double kTargetMax = 10.0;  // linear scaling maps values onto [0, kTargetMax]
inline constexpr double kEta = 0.1;         // learning rate, doubles as the proportional gain
inline constexpr double kLambda = 0.001;    // Tikhonov regularization strength
inline constexpr double kCi = 0.3;          // integral gain
inline constexpr double kCd = 0.1;          // derivative gain
inline constexpr double kAlpha = 0.2;       // integral decay factor
inline constexpr int kRank = 20;            // latent feature dimension
inline constexpr int kMaxEpochs = 200;
inline constexpr double kTol = 1e-6;        // validation-error delta that counts as converged

// Raw factor entries are drawn uniformly from [kInitLow, kInitHigh], so the
// sigmoid-mapped features start small and positive (roughly 0.047..0.119).
inline constexpr double kInitLow = -3.0;
inline constexpr double kInitHigh = -2.0;

inline constexpr std::array<double, 3> kRatios = {0.6, 0.2, 0.2};  // train : validation : test
inline constexpr std::uint64_t kSeed = 1;

}  // namespace pidtf::defaults
