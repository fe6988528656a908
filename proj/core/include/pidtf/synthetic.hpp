#pragma once

#include <cstdint>

#include "pidtf/factor_model.hpp"
#include "pidtf/sparse_tensor.hpp"

namespace pidtf {

/// A generated low-rank instance plus its ground truth.
struct SynthResult {
  SparseTensor tensor;
  FactorSet truth;
  /// Set when fewer than true_rank * (|I| + |J| + |K|) cells were emitted;
  /// recovery is under-determined. A warning, not an error.
  bool under_determined = false;
};

/// Generates a tensor whose values follow the factor model exactly: truth
/// factors are drawn uniformly from [-1, 1], then floor(density * cells)
/// distinct cells are sampled and filled with
///   sum_r sigmoid(u) * sigmoid(o) * sigmoid(m) + Gaussian(0, noise_sd).
/// Noiseless values therefore lie strictly in (0, true_rank). Deterministic
/// for a given seed.
SynthResult synth_low_rank(Dims dims, int true_rank, std::uint64_t seed, double noise_sd,
                           double density);

}  // namespace pidtf
