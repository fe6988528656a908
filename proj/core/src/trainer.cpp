#include "pidtf/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pidtf/errors.hpp"
#include "pidtf/rng.hpp"

namespace pidtf {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::divergence: return "divergence";
  }
  return "unknown";
}

Metrics evaluate(const FactorSet& factors, std::span<const Entry> entries) {
  if (entries.empty()) throw EmptySet("cannot evaluate an empty entry set");
  double sq = 0.0;
  double abs = 0.0;
  for (const Entry& e : entries) {
    const double eps = e.value - predict(factors, e.i, e.j, e.k);
    sq += eps * eps;
    abs += std::abs(eps);
  }
  const auto n = static_cast<double>(entries.size());
  return {std::sqrt(sq / n), abs / n, entries.size()};
}

TrainResult train(std::span<const Entry> train_set, std::span<const Entry> validation_set,
                  Dims dims, const Hyperparams& hyper, std::uint64_t seed,
                  const EpochObserver& observer) {
  hyper.validate();
  if (train_set.empty()) throw EmptySet("training set is empty");
  if (validation_set.empty()) throw EmptySet("validation set is empty");

  TrainResult result;
  result.factors = init_factors(dims, hyper.rank, seed);
  result.state = ControllerState(dims, hyper.rank);
  result.report.hyper = hyper;
  result.report.seed = seed;

  std::vector<Entry> order(train_set.begin(), train_set.end());
  UpdateScratch scratch;

  for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();

    // Fresh pass order every epoch, derived from the run seed.
    std::copy(train_set.begin(), train_set.end(), order.begin());
    Rng epoch_rng(seed ^ static_cast<std::uint64_t>(epoch));
    shuffle(std::span<Entry>(order), epoch_rng);

    try {
      for (const Entry& e : order) {
        apply_instance_update(result.factors, result.state, e, hyper, scratch);
      }
    } catch (const NonFiniteUpdate& e) {
      result.report.stop_reason = StopReason::divergence;
      result.report.divergence_detail = e.what();
      return result;
    }

    const Metrics val = evaluate(result.factors, validation_set);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.report.history.push_back({val.rmse, val.mae, ms});
    result.report.epochs_run = epoch;

    if (observer) {
      observer(epoch, result.factors, result.report.history.back());
    }

    if (epoch >= 2) {
      const EpochRecord& prev = result.report.history[epoch - 2];
      const EpochRecord& cur = result.report.history[epoch - 1];
      const double delta = hyper.stop_metric == StopMetric::rmse
                               ? std::abs(cur.val_rmse - prev.val_rmse)
                               : std::abs(cur.val_mae - prev.val_mae);
      if (delta < hyper.tol) {
        result.report.converged = true;
        result.report.stop_reason = StopReason::tolerance;
        return result;
      }
    }
  }

  result.report.stop_reason = StopReason::max_epochs;
  return result;
}

std::vector<ImputedCell> impute(const FactorSet& factors, const ScalingParams& scaling,
                                std::span<const Cell> queries, bool clamp) {
  std::vector<ImputedCell> out;
  out.reserve(queries.size());
  for (const Cell& q : queries) {
    double value = unscale(predict(factors, q.i, q.j, q.k), scaling);
    if (clamp) {
      value = std::clamp(value, scaling.y_min, scaling.y_max);
    }
    out.push_back({q.i, q.j, q.k, value});
  }
  return out;
}

TrainResult fit(const SplitSets& splits, Dims dims, const Hyperparams& hyper, std::uint64_t seed,
                const EpochObserver& observer) {
  TrainResult result = train(splits.train, splits.validation, dims, hyper, seed, observer);
  if (result.report.stop_reason != StopReason::divergence && !splits.test.empty()) {
    result.report.final_test = evaluate(result.factors, splits.test);
  }
  return result;
}

}  // namespace pidtf
