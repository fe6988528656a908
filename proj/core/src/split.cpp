#include "pidtf/split.hpp"

#include <cmath>
#include <cstddef>
#include <span>

#include "pidtf/errors.hpp"
#include "pidtf/rng.hpp"

namespace pidtf {

SplitSets split(const SparseTensor& tensor, std::array<double, 3> ratios, std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0) {
      throw RatioSumError("ratios must be non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw RatioSumError("ratios must sum to 1");
  }

  std::vector<Entry> order = tensor.entries();
  Rng rng(seed);
  shuffle(std::span<Entry>(order), rng);

  const auto n = order.size();
  const auto n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n)));
  const auto n_train = n - n_val - n_test;  // flooring remainders go to training

  SplitSets sets;
  sets.train.assign(order.begin(), order.begin() + n_train);
  sets.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  sets.test.assign(order.begin() + n_train + n_val, order.end());
  return sets;
}

}  // namespace pidtf
