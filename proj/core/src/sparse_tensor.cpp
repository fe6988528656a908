#include "pidtf/sparse_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "pidtf/errors.hpp"

namespace pidtf {

namespace {

std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> key(const Entry& e) {
  return {e.k, e.i, e.j};
}

}  // namespace

SparseTensor SparseTensor::from_entries(Dims dims, std::vector<Entry> entries) {
  if (dims.time_steps == 0 || dims.meters == 0 || dims.days == 0) {
    throw InvalidArgument("tensor dims must be positive");
  }
  if (entries.empty()) {
    throw EmptyTensor("a tensor needs at least one known entry");
  }
  for (const Entry& e : entries) {
    if (e.i >= dims.time_steps || e.j >= dims.meters || e.k >= dims.days) {
      throw IndexOutOfRange("entry (" + std::to_string(e.i) + "," + std::to_string(e.j) + "," +
                            std::to_string(e.k) + ") outside dims");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return key(a) < key(b); });
  for (std::size_t n = 1; n < entries.size(); ++n) {
    if (key(entries[n - 1]) == key(entries[n])) {
      const Entry& e = entries[n];
      throw DuplicateIndex("duplicate entry at (" + std::to_string(e.i) + "," +
                           std::to_string(e.j) + "," + std::to_string(e.k) + ")");
    }
  }
  return SparseTensor(dims, std::move(entries));
}

double SparseTensor::density() const {
  return static_cast<double>(entries_.size()) / static_cast<double>(dims_.cells());
}

std::pair<double, double> SparseTensor::value_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Entry& e : entries_) {
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  return {lo, hi};
}

std::pair<SparseTensor, ScalingParams> scale_linear(const SparseTensor& tensor,
                                                    double target_max) {
  if (!(target_max > 0.0)) {
    throw InvalidArgument("target_max must be positive");
  }
  const auto [y_min, y_max] = tensor.value_range();
  if (y_max == y_min) {
    throw DegenerateRange("all values equal " + std::to_string(y_min) +
                          "; nothing to scale");
  }
  const ScalingParams params{y_min, y_max, target_max};
  std::vector<Entry> scaled = tensor.entries();
  for (Entry& e : scaled) {
    e.value = scale_value(e.value, params);
  }
  return {SparseTensor::from_entries(tensor.dims(), std::move(scaled)), params};
}

double scale_value(double y, const ScalingParams& params) {
  return params.target_max * (y - params.y_min) / (params.y_max - params.y_min);
}

double unscale(double value, const ScalingParams& params) {
  return params.y_min + value * (params.y_max - params.y_min) / params.target_max;
}

}  // namespace pidtf
