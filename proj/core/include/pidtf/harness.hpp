#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pidtf/trainer.hpp"

namespace pidtf {

/// Side-by-side result of a run with the controller on versus off.
struct AblationReport {
  TrainReport pid;       // the hyperparameters as given
  TrainReport baseline;  // same run with c_i = c_d = 0
  double reduction_pct = 0.0;  // (larger - smaller) / larger on epoch counts, in percent
};

/// (larger - smaller) / larger as a percentage.
double iteration_reduction_pct(int epochs_a, int epochs_b);

/// Trains twice with identical data, seed and instance order: once with the
/// given gains, once with c_i = c_d = 0. Throws InvalidArgument when both
/// gains are already zero (nothing to ablate).
AblationReport ablate(const SplitSets& splits, Dims dims, const Hyperparams& hyper_pid,
                      std::uint64_t seed);

/// One swept parameter: a hyperparameter name and the values to try.
/// Known names: eta, lambda, c_i, c_d, alpha, rank.
struct SweepParam {
  std::string name;
  std::vector<double> values;
};

/// Returns base with the named parameter replaced; throws InvalidArgument on
/// an unknown name.
Hyperparams with_param(Hyperparams base, const std::string& name, double value);

struct SweepRow {
  std::vector<std::pair<std::string, double>> params;
  int epochs = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_epochs;
  double rmse = 0.0;  // final test metrics; NaN when the cell diverged
  double mae = 0.0;
  double ms = 0.0;    // total training wall time of the cell
};

struct SweepReport {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;
};

/// Full-factorial sweep over one or two parameters (first parameter is the
/// outer loop). Every cell trains on the same splits with the same seed.
/// Divergent cells produce a row instead of aborting the sweep.
SweepReport sweep(const SplitSets& splits, Dims dims, const Hyperparams& base,
                  std::span<const SweepParam> grid, std::uint64_t seed);

/// Mean and sample standard deviation (0 when n < 2).
struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
};

Aggregate aggregate(std::span<const double> values);

/// Repetition protocol: run r uses seed base_seed + r for the split and the
/// training run, so repeats re-randomize the partition, the init and the
/// instance order.
struct RepeatReport {
  std::vector<TrainReport> runs;
  Aggregate epochs;
  Aggregate rmse;
  Aggregate mae;
};

RepeatReport repeat_fit(const SparseTensor& data, std::array<double, 3> ratios,
                        const Hyperparams& hyper, std::uint64_t base_seed, int repeats);

/// CSV emitters with a stable, documented column order.
/// History: epoch,val_rmse,val_mae,ms
void write_history_csv(const TrainReport& report, std::ostream& out);
/// Sweep: <param names...>,epochs,converged,stop_reason,rmse,mae,ms
void write_sweep_csv(const SweepReport& report, std::ostream& out);
/// Ablation: arm,c_i,c_d,epochs,converged,stop_reason,rmse,mae
void write_ablation_csv(const AblationReport& report, std::ostream& out);

}  // namespace pidtf
