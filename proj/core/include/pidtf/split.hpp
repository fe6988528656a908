#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pidtf/sparse_tensor.hpp"

namespace pidtf {

/// Disjoint train / validation / test partition of a tensor's known entries.
struct SplitSets {
  std::vector<Entry> train;
  std::vector<Entry> validation;
  std::vector<Entry> test;
};

/// Partitions the entries by a seeded deterministic shuffle (mt19937_64
/// Fisher-Yates over the canonical entry order, then a contiguous cut).
/// Validation and test receive floor(ratio * |entries|) entries each; train
/// takes the rest, so flooring remainders land in the training set.
/// Ratios must be non-negative and sum to 1 within 1e-9 (throws RatioSumError).
SplitSets split(const SparseTensor& tensor, std::array<double, 3> ratios, std::uint64_t seed);

}  // namespace pidtf
