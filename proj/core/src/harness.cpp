#include "pidtf/harness.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "pidtf/errors.hpp"
#include "pidtf/split.hpp"

namespace pidtf {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

double total_ms(const TrainReport& report) {
  double ms = 0.0;
  for (const EpochRecord& rec : report.history) ms += rec.ms;
  return ms;
}

}  // namespace

double iteration_reduction_pct(int epochs_a, int epochs_b) {
  const int larger = std::max(epochs_a, epochs_b);
  const int smaller = std::min(epochs_a, epochs_b);
  if (larger == 0) return 0.0;
  return 100.0 * static_cast<double>(larger - smaller) / static_cast<double>(larger);
}

AblationReport ablate(const SplitSets& splits, Dims dims, const Hyperparams& hyper_pid,
                      std::uint64_t seed) {
  if (hyper_pid.c_i == 0.0 && hyper_pid.c_d == 0.0) {
    throw InvalidArgument("ablation needs a nonzero c_i or c_d to switch off");
  }
  Hyperparams hyper_base = hyper_pid;
  hyper_base.c_i = 0.0;
  hyper_base.c_d = 0.0;

  AblationReport report;
  report.pid = fit(splits, dims, hyper_pid, seed).report;
  report.baseline = fit(splits, dims, hyper_base, seed).report;
  report.reduction_pct =
      iteration_reduction_pct(report.pid.epochs_run, report.baseline.epochs_run);
  return report;
}

Hyperparams with_param(Hyperparams base, const std::string& name, double value) {
  if (name == "eta") {
    base.eta = value;
  } else if (name == "lambda") {
    base.lambda = value;
  } else if (name == "c_i") {
    base.c_i = value;
  } else if (name == "c_d") {
    base.c_d = value;
  } else if (name == "alpha") {
    base.alpha = value;
  } else if (name == "rank") {
    base.rank = static_cast<int>(value);
  } else {
    throw InvalidArgument("unknown sweep parameter '" + name + "'");
  }
  return base;
}

SweepReport sweep(const SplitSets& splits, Dims dims, const Hyperparams& base,
                  std::span<const SweepParam> grid, std::uint64_t seed) {
  if (grid.empty() || grid.size() > 2) {
    throw InvalidArgument("sweep takes one or two parameters");
  }
  for (const SweepParam& p : grid) {
    if (p.values.empty()) throw InvalidArgument("sweep parameter '" + p.name + "' has no values");
    with_param(base, p.name, p.values.front());  // validates the name up front
  }

  SweepReport report;
  for (const SweepParam& p : grid) report.param_names.push_back(p.name);

  const std::size_t outer = grid[0].values.size();
  const std::size_t inner = grid.size() == 2 ? grid[1].values.size() : 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t a = 0; a < outer; ++a) {
    for (std::size_t b = 0; b < inner; ++b) {
      Hyperparams hyper = with_param(base, grid[0].name, grid[0].values[a]);
      SweepRow row;
      row.params.emplace_back(grid[0].name, grid[0].values[a]);
      if (grid.size() == 2) {
        hyper = with_param(hyper, grid[1].name, grid[1].values[b]);
        row.params.emplace_back(grid[1].name, grid[1].values[b]);
      }

      const TrainResult result = fit(splits, dims, hyper, seed);
      row.epochs = result.report.epochs_run;
      row.converged = result.report.converged;
      row.stop_reason = result.report.stop_reason;
      row.ms = total_ms(result.report);
      if (result.report.final_test) {
        row.rmse = result.report.final_test->rmse;
        row.mae = result.report.final_test->mae;
      } else {
        row.rmse = nan;
        row.mae = nan;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

RepeatReport repeat_fit(const SparseTensor& data, std::array<double, 3> ratios,
                        const Hyperparams& hyper, std::uint64_t base_seed, int repeats) {
  if (repeats < 1) throw InvalidArgument("repeats must be at least 1");

  RepeatReport report;
  std::vector<double> epochs, rmse, mae;
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
    const SplitSets splits = split(data, ratios, seed);
    TrainResult run = fit(splits, data.dims(), hyper, seed);
    epochs.push_back(static_cast<double>(run.report.epochs_run));
    if (run.report.final_test) {
      rmse.push_back(run.report.final_test->rmse);
      mae.push_back(run.report.final_test->mae);
    }
    report.runs.push_back(std::move(run.report));
  }
  report.epochs = aggregate(epochs);
  report.rmse = aggregate(rmse);
  report.mae = aggregate(mae);
  return report;
}

void write_history_csv(const TrainReport& report, std::ostream& out) {
  out << "epoch,val_rmse,val_mae,ms\n";
  for (std::size_t n = 0; n < report.history.size(); ++n) {
    const EpochRecord& rec = report.history[n];
    out << (n + 1) << ',' << fmt_double(rec.val_rmse) << ',' << fmt_double(rec.val_mae) << ','
        << fmt_ms(rec.ms) << '\n';
  }
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  for (const std::string& name : report.param_names) out << name << ',';
  out << "epochs,rmse,mae,ms,converged,stop_reason\n";
  for (const SweepRow& row : report.rows) {
    for (const auto& [name, value] : row.params) out << fmt_double(value) << ',';
    out << row.epochs << ',' << fmt_double(row.rmse) << ',' << fmt_double(row.mae) << ','
        << fmt_ms(row.ms) << ',' << (row.converged ? 1 : 0) << ',' << to_string(row.stop_reason)
        << '\n';
  }
}

void write_ablation_csv(const AblationReport& report, std::ostream& out) {
  out << "arm,c_i,c_d,epochs,rmse,mae,ms,converged,stop_reason\n";
  const auto row = [&out](const char* arm, const TrainReport& rep) {
    out << arm << ',' << fmt_double(rep.hyper.c_i) << ',' << fmt_double(rep.hyper.c_d) << ','
        << rep.epochs_run << ',';
    if (rep.final_test) {
      out << fmt_double(rep.final_test->rmse) << ',' << fmt_double(rep.final_test->mae);
    } else {
      out << "nan,nan";
    }
    out << ',' << fmt_ms(total_ms(rep)) << ',' << (rep.converged ? 1 : 0) << ','
        << to_string(rep.stop_reason) << '\n';
  };
  row("pid", report.pid);
  row("baseline", report.baseline);
}

}  // namespace pidtf
