#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "pidtf/csv.hpp"
#include "pidtf/defaults.hpp"
#include "pidtf/errors.hpp"
#include "pidtf/harness.hpp"
#include "pidtf/model_io.hpp"
#include "pidtf/split.hpp"
#include "pidtf/synthetic.hpp"
#include "pidtf/trainer.hpp"
#include "pidtf/version.hpp"

namespace pidtf::cli {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) parts.push_back(item);
  return parts;
}

std::array<double, 3> parse_ratios(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) throw InvalidArgument("ratios must be three comma-separated numbers");
  std::array<double, 3> ratios{};
  for (std::size_t n = 0; n < 3; ++n) {
    try {
      ratios[n] = std::stod(parts[n]);
    } catch (const std::exception&) {
      throw InvalidArgument("bad ratio '" + parts[n] + "'");
    }
  }
  return ratios;
}

Dims parse_dims(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) throw InvalidArgument("dims must be I,J,K");
  std::array<std::uint32_t, 3> d{};
  for (std::size_t n = 0; n < 3; ++n) {
    try {
      const long v = std::stol(parts[n]);
      if (v < 1) throw InvalidArgument("dims must be positive");
      d[n] = static_cast<std::uint32_t>(v);
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidArgument("bad dim '" + parts[n] + "'");
    }
  }
  return {d[0], d[1], d[2]};
}

SweepParam parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidArgument("grid must look like name=v1,v2,...");
  SweepParam param;
  param.name = text.substr(0, eq);
  for (const std::string& v : split_list(text.substr(eq + 1))) {
    try {
      param.values.push_back(std::stod(v));
    } catch (const std::exception&) {
      throw InvalidArgument("bad grid value '" + v + "'");
    }
  }
  if (param.values.empty()) throw InvalidArgument("grid '" + param.name + "' has no values");
  return param;
}

std::string default_ratios_text() {
  return g6(defaults::kRatios[0]) + "," + g6(defaults::kRatios[1]) + "," +
         g6(defaults::kRatios[2]);
}

// ---- flat key = value config files -------------------------------------
// Explicit flags always win over config entries; config entries win over
// defaults.

using Setter = std::function<void(const std::string&)>;

std::string strip(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    items.emplace_back(strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
  }
  return items;
}

Setter set_double(double& slot) {
  return [&slot](const std::string& v) {
    try {
      slot = std::stod(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad config number '" + v + "'");
    }
  };
}

Setter set_int(int& slot) {
  return [&slot](const std::string& v) {
    try {
      slot = std::stoi(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad config integer '" + v + "'");
    }
  };
}

Setter set_u64(std::uint64_t& slot) {
  return [&slot](const std::string& v) {
    try {
      slot = std::stoull(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad config integer '" + v + "'");
    }
  };
}

Setter set_string(std::string& slot) {
  return [&slot](const std::string& v) { slot = v; };
}

Setter set_bool(bool& slot) {
  return [&slot](const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") slot = true;
    else if (v == "false" || v == "0" || v == "no") slot = false;
    else throw InvalidArgument("bad config boolean '" + v + "'");
  };
}

void apply_config(const CLI::App& cmd, const std::string& path,
                  const std::map<std::string, Setter>& setters) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_flat_config(path)) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw InvalidArgument("unknown config key '" + key + "'");
    const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) continue;
    it->second(value);
  }
}

// Hyperparameter flags shared by train, ablate and sweep.
struct HyperOptions {
  double eta = defaults::kEta;
  double lambda = defaults::kLambda;
  double c_i = defaults::kCi;
  double c_d = defaults::kCd;
  double alpha = defaults::kAlpha;
  int rank = defaults::kRank;
  int max_epochs = defaults::kMaxEpochs;
  double tol = defaults::kTol;
  std::string reg_mode = to_string(RegMode::analytic);
  std::string stop_metric = to_string(StopMetric::rmse);
  std::string first_visit_derivative = to_string(FirstVisitDerivative::zero);

  Hyperparams to_hyperparams() const {
    Hyperparams h;
    h.eta = eta;
    h.lambda = lambda;
    h.c_i = c_i;
    h.c_d = c_d;
    h.alpha = alpha;
    h.rank = rank;
    h.max_epochs = max_epochs;
    h.tol = tol;
    h.reg_mode = reg_mode_from_string(reg_mode);
    h.stop_metric = stop_metric_from_string(stop_metric);
    h.first_visit_derivative = first_visit_derivative_from_string(first_visit_derivative);
    h.validate();
    return h;
  }
};

void add_hyper_options(CLI::App& cmd, HyperOptions& h) {
  cmd.add_option("--eta", h.eta, "Learning rate (proportional gain)");
  cmd.add_option("--lambda", h.lambda, "Regularization strength");
  cmd.add_option("--c_i,--c-i", h.c_i, "Integral gain");
  cmd.add_option("--c_d,--c-d", h.c_d, "Derivative gain");
  cmd.add_option("--alpha", h.alpha, "Integral decay factor");
  cmd.add_option("--rank", h.rank, "Latent feature dimension R");
  cmd.add_option("--max_epochs,--max-epochs", h.max_epochs, "Epoch cap");
  cmd.add_option("--tol", h.tol, "Convergence threshold on the validation metric delta");
  cmd.add_option("--reg_mode,--reg-mode", h.reg_mode, "Regularization gradient: analytic|paper");
  cmd.add_option("--stop_metric,--stop-metric", h.stop_metric, "Convergence metric: rmse|mae");
  cmd.add_option("--first_visit_derivative,--first-visit-derivative", h.first_visit_derivative,
                 "Derivative term on an element's first update: zero|literal");
}

void print_header(std::ostream& out, const std::string& command) {
  out << "pidtf " << kVersion << "\n";
  out << "command = " << command << "\n";
}

void print_hyper(std::ostream& out, const Hyperparams& h) {
  out << "eta = " << g17(h.eta) << "\n"
      << "lambda = " << g17(h.lambda) << "\n"
      << "c_i = " << g17(h.c_i) << "\n"
      << "c_d = " << g17(h.c_d) << "\n"
      << "alpha = " << g17(h.alpha) << "\n"
      << "rank = " << h.rank << "\n"
      << "max_epochs = " << h.max_epochs << "\n"
      << "tol = " << g17(h.tol) << "\n"
      << "reg_mode = " << to_string(h.reg_mode) << "\n"
      << "stop_metric = " << to_string(h.stop_metric) << "\n"
      << "first_visit_derivative = " << to_string(h.first_visit_derivative) << "\n";
}

void print_tensor_summary(std::ostream& out, const SparseTensor& tensor) {
  const Dims& d = tensor.dims();
  out << "dims = " << d.time_steps << "x" << d.meters << "x" << d.days << "\n";
  out << "entries = " << tensor.nnz() << " (density " << g6(tensor.density()) << ")\n";
}

// Applies the train-time scaling choice. Constant data cannot be scaled; we
// warn and continue unscaled rather than fail the run.
std::pair<SparseTensor, std::optional<ScalingParams>> maybe_scale(const SparseTensor& tensor,
                                                                  bool no_scale, double target,
                                                                  std::ostream& out) {
  if (no_scale) return {tensor, std::nullopt};
  try {
    auto [scaled, params] = scale_linear(tensor, target);
    out << "scale = " << g6(target) << " (y_min=" << g17(params.y_min)
        << ", y_max=" << g17(params.y_max) << ")\n";
    return {std::move(scaled), params};
  } catch (const DegenerateRange& e) {
    out << "warning: " << e.what() << "; training on unscaled values\n";
    return {tensor, std::nullopt};
  }
}

void print_final(std::ostream& out, const TrainReport& report) {
  out << "stop = " << to_string(report.stop_reason) << " after " << report.epochs_run
      << " epochs (converged=" << (report.converged ? "yes" : "no") << ")\n";
  if (report.stop_reason == StopReason::divergence) {
    out << "divergence: " << report.divergence_detail << "\n";
  }
  if (report.final_test) {
    out << "test rmse = " << g17(report.final_test->rmse)
        << "  mae = " << g17(report.final_test->mae) << "\n";
  }
}

struct DataOptions {
  std::string data;
  std::string ratios = default_ratios_text();
  std::uint64_t seed = defaults::kSeed;
  double scale = defaults::kTargetMax;
  bool no_scale = false;
};

void add_data_options(CLI::App& cmd, DataOptions& d) {
  cmd.add_option("--data", d.data, "Tensor interchange CSV")->required();
  cmd.add_option("--ratios", d.ratios, "train,validation,test ratios");
  cmd.add_option("--seed", d.seed, "Seed for split, init and epoch shuffles");
  cmd.add_option("--scale", d.scale, "Linear-scaling target maximum");
  cmd.add_flag("--no_scale,--no-scale", d.no_scale, "Train on raw values");
}

std::map<std::string, Setter> config_setters(HyperOptions& h, DataOptions& d) {
  std::map<std::string, Setter> m;
  m["eta"] = set_double(h.eta);
  m["lambda"] = set_double(h.lambda);
  m["c_i"] = set_double(h.c_i);
  m["c_d"] = set_double(h.c_d);
  m["alpha"] = set_double(h.alpha);
  m["rank"] = set_int(h.rank);
  m["max_epochs"] = set_int(h.max_epochs);
  m["tol"] = set_double(h.tol);
  m["reg_mode"] = set_string(h.reg_mode);
  m["stop_metric"] = set_string(h.stop_metric);
  m["first_visit_derivative"] = set_string(h.first_visit_derivative);
  m["ratios"] = set_string(d.ratios);
  m["seed"] = set_u64(d.seed);
  m["scale"] = set_double(d.scale);
  m["no_scale"] = set_bool(d.no_scale);
  return m;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse 3-way tensor completion for meter readings: "
               "non-negative latent factorization trained by PID-controlled SGD"};
  app.require_subcommand(1);

  // ---- synth ----------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "Generate a low-rank synthetic tensor");
  struct {
    std::string dims;
    int rank = 4;
    double density = 0.1;
    double noise = 0.0;
    std::uint64_t seed = defaults::kSeed;
    std::string out_path;
    std::string truth_path;
  } synth_opts;
  synth_cmd->add_option("--dims", synth_opts.dims, "I,J,K")->required();
  synth_cmd->add_option("--rank", synth_opts.rank, "Ground-truth rank");
  synth_cmd->add_option("--density", synth_opts.density, "Fraction of cells emitted");
  synth_cmd->add_option("--noise", synth_opts.noise, "Gaussian noise standard deviation");
  synth_cmd->add_option("--seed", synth_opts.seed, "Generator seed");
  synth_cmd->add_option("--out", synth_opts.out_path, "Output tensor CSV")->required();
  synth_cmd->add_option("--truth", synth_opts.truth_path, "Also save the ground-truth factors");
  synth_cmd->callback([&] {
    print_header(out, "synth");
    out << "seed = " << synth_opts.seed << "\n";
    out << "rank = " << synth_opts.rank << "\n";
    out << "density = " << g17(synth_opts.density) << "\n";
    out << "noise = " << g17(synth_opts.noise) << "\n";
    const Dims dims = parse_dims(synth_opts.dims);
    const SynthResult result = synth_low_rank(dims, synth_opts.rank, synth_opts.seed,
                                              synth_opts.noise, synth_opts.density);
    if (result.under_determined) {
      out << "warning: fewer known entries than rank*(I+J+K); recovery is under-determined\n";
    }
    print_tensor_summary(out, result.tensor);
    write_tensor_csv(result.tensor, synth_opts.out_path);
    out << "tensor written to " << synth_opts.out_path << "\n";
    if (!synth_opts.truth_path.empty()) {
      Hyperparams hyper;
      hyper.rank = synth_opts.rank;
      save_model({dims, result.truth, std::nullopt, hyper, synth_opts.seed},
                 synth_opts.truth_path);
      out << "truth factors written to " << synth_opts.truth_path << "\n";
    }
  });

  // ---- ingest ---------------------------------------------------------
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert a raw meter-log CSV to a tensor");
  struct {
    std::string input;
    std::string out_path;
    std::string meter_map;
    IngestSpec spec;
    std::string date_origin;
  } ingest_opts;
  ingest_cmd->add_option("--input", ingest_opts.input, "Raw CSV")->required();
  ingest_cmd->add_option("--out", ingest_opts.out_path, "Output tensor CSV")->required();
  ingest_cmd->add_option("--meter_map,--meter-map", ingest_opts.meter_map,
                         "Write the dense meter index mapping here");
  ingest_cmd->add_option("--time_col,--time-col", ingest_opts.spec.time_step_column,
                         "Timestamp (or time-of-day) column");
  ingest_cmd->add_option("--meter_col,--meter-col", ingest_opts.spec.meter_column,
                         "Meter id column");
  ingest_cmd->add_option("--value_col,--value-col", ingest_opts.spec.value_column,
                         "Reading column (watts)");
  ingest_cmd->add_option("--date_col,--date-col", ingest_opts.spec.date_column,
                         "Separate date column (omit when the time column holds full timestamps)");
  ingest_cmd->add_option("--seconds_per_step,--seconds-per-step",
                         ingest_opts.spec.seconds_per_step, "Sample period in seconds");
  ingest_cmd->add_option("--date_origin,--date-origin", ingest_opts.date_origin,
                         "Date mapped to day 0 (default: earliest in the file)");
  ingest_cmd->callback([&] {
    print_header(out, "ingest");
    if (!ingest_opts.date_origin.empty()) {
      ingest_opts.spec.date_origin = ingest_opts.date_origin;
    }
    const IngestResult result = ingest_csv(std::filesystem::path(ingest_opts.input),
                                           ingest_opts.spec);
    print_tensor_summary(out, result.tensor);
    out << "meters = " << result.meters.size() << "\n";
    out << "date_origin = " << result.date_origin << "\n";
    write_tensor_csv(result.tensor, ingest_opts.out_path);
    out << "tensor written to " << ingest_opts.out_path << "\n";
    if (!ingest_opts.meter_map.empty()) {
      std::ofstream map_out(ingest_opts.meter_map);
      if (!map_out) throw InvalidArgument("cannot open '" + ingest_opts.meter_map + "'");
      write_meter_map_csv(result.meters, map_out);
      out << "meter map written to " << ingest_opts.meter_map << "\n";
    }
  });

  // ---- train ----------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Fit a model on a tensor");
  struct {
    DataOptions data;
    HyperOptions hyper;
    int repeats = 1;
    std::string save_model_path;
    std::string report_path;
    std::string config_path;
    bool quiet = false;
  } train_opts;
  add_data_options(*train_cmd, train_opts.data);
  add_hyper_options(*train_cmd, train_opts.hyper);
  train_cmd->add_option("--repeats", train_opts.repeats,
                        "Aggregate this many re-seeded runs (seed, seed+1, ...)");
  train_cmd->add_option("--save_model,--save-model", train_opts.save_model_path,
                        "Write the trained model here");
  train_cmd->add_option("--report", train_opts.report_path, "Write the per-epoch history CSV");
  train_cmd->add_flag("--quiet", train_opts.quiet, "Suppress per-epoch lines");
  train_cmd->add_option("--config", train_opts.config_path,
                        "Flat key = value config file (flags win)");
  train_cmd->callback([&] {
    auto setters = config_setters(train_opts.hyper, train_opts.data);
    setters["repeats"] = set_int(train_opts.repeats);
    apply_config(*train_cmd, train_opts.config_path, setters);
    const Hyperparams hyper = train_opts.hyper.to_hyperparams();
    const auto ratios = parse_ratios(train_opts.data.ratios);

    print_header(out, "train");
    out << "data = " << train_opts.data.data << "\n";
    out << "seed = " << train_opts.data.seed << "\n";
    out << "ratios = " << train_opts.data.ratios << "\n";
    print_hyper(out, hyper);

    const SparseTensor raw = read_tensor_csv(std::filesystem::path(train_opts.data.data));
    print_tensor_summary(out, raw);
    auto [tensor, scaling] =
        maybe_scale(raw, train_opts.data.no_scale, train_opts.data.scale, out);

    if (train_opts.repeats > 1) {
      const RepeatReport rep =
          repeat_fit(tensor, ratios, hyper, train_opts.data.seed, train_opts.repeats);
      out << "repeats = " << train_opts.repeats << "\n";
      for (std::size_t n = 0; n < rep.runs.size(); ++n) {
        const TrainReport& r = rep.runs[n];
        out << "run " << n << "  seed " << r.seed << "  epochs " << r.epochs_run << "  stop "
            << to_string(r.stop_reason);
        if (r.final_test) {
          out << "  rmse " << g17(r.final_test->rmse) << "  mae " << g17(r.final_test->mae);
        }
        out << "\n";
      }
      out << "epochs mean = " << g6(rep.epochs.mean) << " +- " << g6(rep.epochs.stddev) << "\n";
      out << "rmse mean = " << g17(rep.rmse.mean) << " +- " << g17(rep.rmse.stddev) << "\n";
      out << "mae mean = " << g17(rep.mae.mean) << " +- " << g17(rep.mae.stddev) << "\n";
      return;
    }

    const SplitSets splits = split(tensor, ratios, train_opts.data.seed);
    out << "split sizes: train=" << splits.train.size()
        << " validation=" << splits.validation.size() << " test=" << splits.test.size() << "\n";

    EpochObserver observer;
    if (!train_opts.quiet) {
      observer = [&out](int epoch, const FactorSet&, const EpochRecord& rec) {
        out << "epoch " << epoch << "  val_rmse " << g17(rec.val_rmse) << "  val_mae "
            << g17(rec.val_mae) << "  ms " << g6(rec.ms) << "\n";
      };
    }

    const TrainResult result = fit(splits, tensor.dims(), hyper, train_opts.data.seed, observer);
    print_final(out, result.report);

    if (!train_opts.report_path.empty()) {
      std::ofstream report_out(train_opts.report_path);
      if (!report_out) throw InvalidArgument("cannot open '" + train_opts.report_path + "'");
      write_history_csv(result.report, report_out);
      out << "history written to " << train_opts.report_path << "\n";
    }
    if (!train_opts.save_model_path.empty()) {
      save_model({tensor.dims(), result.factors, scaling, hyper, train_opts.data.seed},
                 train_opts.save_model_path);
      out << "model written to " << train_opts.save_model_path << "\n";
    }
  });

  // ---- evaluate -------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a saved model against a tensor");
  struct {
    std::string model;
    std::string data;
    std::string subset = "all";
    std::string ratios = default_ratios_text();
    std::uint64_t seed = defaults::kSeed;
  } eval_opts;
  eval_cmd->add_option("--model", eval_opts.model, "Model file")->required();
  eval_cmd->add_option("--data", eval_opts.data, "Tensor interchange CSV")->required();
  eval_cmd->add_option("--subset", eval_opts.subset, "all|train|validation|test");
  eval_cmd->add_option("--ratios", eval_opts.ratios, "Split ratios when subset != all");
  eval_cmd->add_option("--seed", eval_opts.seed, "Split seed when subset != all");
  eval_cmd->callback([&] {
    print_header(out, "evaluate");
    const ModelArtifact model = load_model(std::filesystem::path(eval_opts.model));
    SparseTensor tensor = read_tensor_csv(std::filesystem::path(eval_opts.data));
    if (!(tensor.dims() == model.dims)) {
      throw InvalidArgument("tensor dims do not match the model");
    }
    // Metrics live in the model's training space.
    if (model.scaling) {
      std::vector<Entry> scaled = tensor.entries();
      for (Entry& e : scaled) e.value = scale_value(e.value, *model.scaling);
      tensor = SparseTensor::from_entries(tensor.dims(), std::move(scaled));
      out << "values scaled with the model's stored params\n";
    }

    Metrics metrics;
    if (eval_opts.subset == "all") {
      metrics = evaluate(model.factors, tensor.entries());
    } else {
      out << "seed = " << eval_opts.seed << "\n";
      const SplitSets splits = split(tensor, parse_ratios(eval_opts.ratios), eval_opts.seed);
      const std::vector<Entry>* chosen = nullptr;
      if (eval_opts.subset == "train") chosen = &splits.train;
      else if (eval_opts.subset == "validation") chosen = &splits.validation;
      else if (eval_opts.subset == "test") chosen = &splits.test;
      else throw InvalidArgument("unknown subset '" + eval_opts.subset + "'");
      metrics = evaluate(model.factors, *chosen);
    }
    out << "subset = " << eval_opts.subset << "\n";
    out << "count = " << metrics.count << "\n";
    out << "rmse = " << g17(metrics.rmse) << "\n";
    out << "mae = " << g17(metrics.mae) << "\n";
  });

  // ---- impute ---------------------------------------------------------
  auto* impute_cmd = app.add_subcommand("impute", "Predict values for missing cells");
  struct {
    std::string model;
    std::string queries;
    std::string out_path;
    std::string config_path;
    bool clamp = false;
  } impute_opts;
  impute_cmd->add_option("--model", impute_opts.model, "Model file")->required();
  impute_cmd->add_option("--queries", impute_opts.queries, "CSV of i,j,k cells")->required();
  impute_cmd->add_option("--out", impute_opts.out_path, "Output CSV")->required();
  impute_cmd->add_flag("--clamp", impute_opts.clamp,
                       "Clamp predictions to the observed value range");
  impute_cmd->add_option("--config", impute_opts.config_path,
                         "Flat key = value config file (flags win)");
  impute_cmd->callback([&] {
    std::map<std::string, Setter> setters;
    setters["clamp"] = set_bool(impute_opts.clamp);
    apply_config(*impute_cmd, impute_opts.config_path, setters);
    print_header(out, "impute");
    const ModelArtifact model = load_model(std::filesystem::path(impute_opts.model));
    const std::vector<Cell> queries =
        read_cells_csv(std::filesystem::path(impute_opts.queries));
    const ScalingParams scaling = model.scaling.value_or(ScalingParams::identity(1.0));
    const std::vector<ImputedCell> cells =
        impute(model.factors, scaling, queries, impute_opts.clamp);
    std::ofstream file_out(impute_opts.out_path);
    if (!file_out) throw InvalidArgument("cannot open '" + impute_opts.out_path + "'");
    write_imputed_csv(cells, file_out);
    out << "imputed " << cells.size() << " cells to " << impute_opts.out_path << "\n";
  });

  // ---- ablate ---------------------------------------------------------
  auto* ablate_cmd = app.add_subcommand(
      "ablate", "Train with the controller on and off and compare epoch counts");
  struct {
    DataOptions data;
    HyperOptions hyper;
    std::string out_path;
    std::string config_path;
  } ablate_opts;
  add_data_options(*ablate_cmd, ablate_opts.data);
  add_hyper_options(*ablate_cmd, ablate_opts.hyper);
  ablate_cmd->add_option("--out", ablate_opts.out_path, "Write the comparison CSV here");
  ablate_cmd->add_option("--config", ablate_opts.config_path,
                         "Flat key = value config file (flags win)");
  ablate_cmd->callback([&] {
    apply_config(*ablate_cmd, ablate_opts.config_path,
                 config_setters(ablate_opts.hyper, ablate_opts.data));
    const Hyperparams hyper = ablate_opts.hyper.to_hyperparams();
    print_header(out, "ablate");
    out << "data = " << ablate_opts.data.data << "\n";
    out << "seed = " << ablate_opts.data.seed << "\n";
    print_hyper(out, hyper);

    const SparseTensor raw = read_tensor_csv(std::filesystem::path(ablate_opts.data.data));
    auto [tensor, scaling] =
        maybe_scale(raw, ablate_opts.data.no_scale, ablate_opts.data.scale, out);
    const SplitSets splits = split(tensor, parse_ratios(ablate_opts.data.ratios),
                                   ablate_opts.data.seed);

    const AblationReport report = ablate(splits, tensor.dims(), hyper, ablate_opts.data.seed);
    const auto arm = [&out](const char* name, const TrainReport& r) {
      out << name << ": epochs=" << r.epochs_run << " stop=" << to_string(r.stop_reason);
      if (r.final_test) {
        out << " rmse=" << g17(r.final_test->rmse) << " mae=" << g17(r.final_test->mae);
      }
      out << "\n";
    };
    arm("pid", report.pid);
    arm("baseline", report.baseline);
    out << "iteration reduction = " << g6(report.reduction_pct) << "%\n";

    if (!ablate_opts.out_path.empty()) {
      std::ofstream file_out(ablate_opts.out_path);
      if (!file_out) throw InvalidArgument("cannot open '" + ablate_opts.out_path + "'");
      write_ablation_csv(report, file_out);
      out << "comparison written to " << ablate_opts.out_path << "\n";
    }
  });

  // ---- sweep ----------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Full-factorial hyperparameter sweep");
  struct {
    DataOptions data;
    HyperOptions hyper;
    std::vector<std::string> grids;
    std::string out_path;
    std::string config_path;
  } sweep_opts;
  add_data_options(*sweep_cmd, sweep_opts.data);
  add_hyper_options(*sweep_cmd, sweep_opts.hyper);
  sweep_cmd->add_option("--grid", sweep_opts.grids, "name=v1,v2,... (repeat for a second axis)")
      ->required()
      ->expected(1, 2);
  sweep_cmd->add_option("--out", sweep_opts.out_path, "Write the sweep CSV here (default stdout)");
  sweep_cmd->add_option("--config", sweep_opts.config_path,
                        "Flat key = value config file (flags win)");
  sweep_cmd->callback([&] {
    apply_config(*sweep_cmd, sweep_opts.config_path,
                 config_setters(sweep_opts.hyper, sweep_opts.data));
    const Hyperparams hyper = sweep_opts.hyper.to_hyperparams();
    print_header(out, "sweep");
    out << "data = " << sweep_opts.data.data << "\n";
    out << "seed = " << sweep_opts.data.seed << "\n";
    print_hyper(out, hyper);

    std::vector<SweepParam> grid;
    for (const std::string& text : sweep_opts.grids) grid.push_back(parse_grid(text));

    const SparseTensor raw = read_tensor_csv(std::filesystem::path(sweep_opts.data.data));
    auto [tensor, scaling] =
        maybe_scale(raw, sweep_opts.data.no_scale, sweep_opts.data.scale, out);
    const SplitSets splits =
        split(tensor, parse_ratios(sweep_opts.data.ratios), sweep_opts.data.seed);

    const SweepReport report = sweep(splits, tensor.dims(), hyper, grid, sweep_opts.data.seed);
    if (sweep_opts.out_path.empty()) {
      write_sweep_csv(report, out);
    } else {
      std::ofstream file_out(sweep_opts.out_path);
      if (!file_out) throw InvalidArgument("cannot open '" + sweep_opts.out_path + "'");
      write_sweep_csv(report, file_out);
      out << "sweep written to " << sweep_opts.out_path << " (" << report.rows.size()
          << " rows)\n";
    }
  });

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("pidtf");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace pidtf::cli
