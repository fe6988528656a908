#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pidtf/factor_model.hpp"
#include "pidtf/pid_optimizer.hpp"
#include "pidtf/split.hpp"

namespace pidtf {

/// RMSE and MAE over one entry set.
struct Metrics {
  double rmse = 0.0;
  double mae = 0.0;
  std::size_t count = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class StopReason { tolerance, max_epochs, divergence };

const char* to_string(StopReason reason);

struct EpochRecord {
  double val_rmse = 0.0;
  double val_mae = 0.0;
  double ms = 0.0;  // wall time of the epoch, updates plus validation pass
};

/// Everything a run produces besides the model itself. With a fixed seed,
/// hyperparameters and data, every field except the wall-clock times is
/// reproducible bit for bit.
struct TrainReport {
  int epochs_run = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_epochs;
  std::vector<EpochRecord> history;        // one record per completed epoch
  std::optional<Metrics> final_test;       // filled by fit(), absent after divergence
  Hyperparams hyper;
  std::uint64_t seed = 0;
  std::string divergence_detail;           // empty unless stop_reason == divergence
};

/// Called after each completed epoch with the current factors; used for
/// progress output and trajectory capture in tests. Epochs count from 1.
using EpochObserver = std::function<void(int epoch, const FactorSet&, const EpochRecord&)>;

struct TrainResult {
  FactorSet factors;
  ControllerState state;
  TrainReport report;
};

/// Runs the epoch loop: factors start from init_factors(dims, rank, seed);
/// each epoch visits the training instances in a fresh seeded order (the
/// canonical order shuffled with mt19937_64 seeded by seed XOR epoch, epochs
/// counted from 1), then evaluates the validation set. Stops when the chosen
/// validation metric changes by less than tol between consecutive epochs, at
/// max_epochs, or on divergence (the report says which; divergence does not
/// throw so sweeps survive bad cells).
/// Throws EmptySet when either entry set is empty, InvalidArgument for bad
/// hyperparameters.
TrainResult train(std::span<const Entry> train_set, std::span<const Entry> validation_set,
                  Dims dims, const Hyperparams& hyper, std::uint64_t seed,
                  const EpochObserver& observer = {});

/// RMSE/MAE of the current factors over the given entries.
/// Throws EmptySet on an empty span.
Metrics evaluate(const FactorSet& factors, std::span<const Entry> entries);

/// A prediction mapped back to the original unit.
struct ImputedCell {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  double value = 0.0;  // watts when the scaling params came from the raw data
};

/// Predicts each queried cell and unscales it; with clamp the result is
/// limited to [y_min, y_max] of the scaling params.
std::vector<ImputedCell> impute(const FactorSet& factors, const ScalingParams& scaling,
                                std::span<const Cell> queries, bool clamp = false);

/// train() plus a final test-set evaluation recorded in report.final_test.
TrainResult fit(const SplitSets& splits, Dims dims, const Hyperparams& hyper, std::uint64_t seed,
                const EpochObserver& observer = {});

}  // namespace pidtf
