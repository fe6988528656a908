#include "pidtf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "pidtf/errors.hpp"
#include "pidtf/rng.hpp"

namespace pidtf {

SynthResult synth_low_rank(Dims dims, int true_rank, std::uint64_t seed, double noise_sd,
                           double density) {
  if (true_rank < 1) throw InvalidArgument("true_rank must be at least 1");
  if (!(density > 0.0) || density > 1.0) throw InvalidArgument("density must lie in (0, 1]");
  if (noise_sd < 0.0) throw InvalidArgument("noise_sd must be non-negative");
  if (dims.cells() == 0) throw InvalidArgument("dims must be positive");

  Rng rng(seed);

  // Ground truth factors in [-1, 1]: mid-slope sigmoid region, well away
  // from saturation, so the instance is actually recoverable.
  FactorSet truth(dims, true_rank);
  for (Matrix* mat : {&truth.u, &truth.o, &truth.m}) {
    for (double& v : mat->flat()) {
      v = uniform_in(rng, -1.0, 1.0);
    }
  }

  const std::uint64_t cells = dims.cells();
  const auto count = static_cast<std::uint64_t>(std::floor(density * static_cast<double>(cells)));
  const std::uint64_t target = std::max<std::uint64_t>(count, 1);

  // Distinct cells by rejection; deterministic because the draw sequence is.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(target * 2);
  while (chosen.size() < target) {
    chosen.insert(draw_below(rng, cells));
  }
  std::vector<std::uint64_t> flat(chosen.begin(), chosen.end());
  std::sort(flat.begin(), flat.end());

  // Flat index laid out as ((k * |J|) + j) * |I| + i.
  std::vector<Entry> entries;
  entries.reserve(flat.size());
  for (std::uint64_t cell : flat) {
    const auto i = static_cast<std::uint32_t>(cell % dims.time_steps);
    const std::uint64_t rest = cell / dims.time_steps;
    const auto j = static_cast<std::uint32_t>(rest % dims.meters);
    const auto k = static_cast<std::uint32_t>(rest / dims.meters);
    double value = 0.0;
    for (int r = 0; r < true_rank; ++r) {
      value += sigmoid(truth.u(i, r)) * sigmoid(truth.o(j, r)) * sigmoid(truth.m(k, r));
    }
    if (noise_sd > 0.0) {
      value += gaussian(rng, 0.0, noise_sd);
    }
    entries.push_back({i, j, k, value});
  }

  SynthResult result{SparseTensor::from_entries(dims, std::move(entries)), std::move(truth),
                     false};
  const std::uint64_t needed =
      static_cast<std::uint64_t>(true_rank) *
      (static_cast<std::uint64_t>(dims.time_steps) + dims.meters + dims.days);
  result.under_determined = result.tensor.nnz() < needed;
  return result;
}

}  // namespace pidtf
