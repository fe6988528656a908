#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pidtf/defaults.hpp"

namespace pidtf {

/// Extents of the three tensor modes: time step within day (i), meter (j),
/// date (k).
struct Dims {
  std::uint32_t time_steps = 0;
  std::uint32_t meters = 0;
  std::uint32_t days = 0;

  std::uint64_t cells() const {
    return static_cast<std::uint64_t>(time_steps) * meters * days;
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// One known reading: cell (i, j, k) plus its value. Values are watts on
/// ingestion and dimensionless after linear scaling.
struct Entry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// A cell address without a value, e.g. an imputation query.
struct Cell {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// COO-format sparse 3-way tensor of known readings. Entries are kept sorted
/// by (k, i, j) so epoch traversal walks days contiguously. Immutable after
/// construction; safe for concurrent reads.
class SparseTensor {
 public:
  /// Validates and canonicalizes the entry list.
  /// Throws EmptyTensor, IndexOutOfRange or DuplicateIndex.
  static SparseTensor from_entries(Dims dims, std::vector<Entry> entries);

  const Dims& dims() const { return dims_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  /// Known density |entries| / (|I||J||K|), always in (0, 1].
  double density() const;

  /// (min, max) over the known values.
  std::pair<double, double> value_range() const;

 private:
  SparseTensor(Dims dims, std::vector<Entry> entries)
      : dims_(dims), entries_(std::move(entries)) {}

  Dims dims_;
  std::vector<Entry> entries_;
};

/// Parameters of the linear feature scaling y~ = target_max * (y - y_min) / (y_max - y_min),
/// kept so imputed values can be mapped back to watts.
struct ScalingParams {
  double y_min = 0.0;
  double y_max = defaults::kTargetMax;
  double target_max = defaults::kTargetMax;

  /// Params under which scale/unscale are the identity map.
  static ScalingParams identity(double target_max = defaults::kTargetMax) {
    return {0.0, target_max, target_max};
  }

  friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

/// Maps all values onto [0, target_max]. Throws DegenerateRange when the
/// values span zero width (caller may skip scaling for constant data).
std::pair<SparseTensor, ScalingParams> scale_linear(const SparseTensor& tensor,
                                                    double target_max = defaults::kTargetMax);

/// Forward map for a single value under previously computed params.
double scale_value(double y, const ScalingParams& params);

/// Inverse map: scaled value back to the original unit.
double unscale(double value, const ScalingParams& params);

}  // namespace pidtf
