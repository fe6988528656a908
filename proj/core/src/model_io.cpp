#include "pidtf/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "pidtf/errors.hpp"
#include "pidtf/version.hpp"

namespace pidtf {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "pidtf-model";
constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix& mat) {
  return json(std::vector<double>(mat.flat().begin(), mat.flat().end()));
}

Matrix matrix_from_json(const json& values, std::size_t rows, std::size_t cols,
                        const char* name) {
  if (!values.is_array() || values.size() != rows * cols) {
    throw InvalidArgument(std::string("model factor '") + name + "' has the wrong element count");
  }
  Matrix mat(rows, cols);
  std::size_t n = 0;
  for (double& v : mat.flat()) {
    v = values[n++].get<double>();
  }
  return mat;
}

}  // namespace

void save_model(const ModelArtifact& model, std::ostream& out) {
  json doc;
  doc["format"] = kFormatTag;
  doc["format_version"] = kFormatVersion;
  doc["tool_version"] = kVersion;
  doc["dims"] = {model.dims.time_steps, model.dims.meters, model.dims.days};
  doc["rank"] = model.factors.rank();
  doc["seed"] = model.seed;

  const Hyperparams& h = model.hyper;
  doc["hyper"] = {{"eta", h.eta},
                  {"lambda", h.lambda},
                  {"c_i", h.c_i},
                  {"c_d", h.c_d},
                  {"alpha", h.alpha},
                  {"rank", h.rank},
                  {"max_epochs", h.max_epochs},
                  {"tol", h.tol},
                  {"reg_mode", to_string(h.reg_mode)},
                  {"stop_metric", to_string(h.stop_metric)},
                  {"first_visit_derivative", to_string(h.first_visit_derivative)}};

  if (model.scaling) {
    doc["scaling"] = {{"y_min", model.scaling->y_min},
                      {"y_max", model.scaling->y_max},
                      {"target_max", model.scaling->target_max}};
  } else {
    doc["scaling"] = nullptr;
  }

  // Row-major flat layout, one array per mode.
  doc["factors"] = {{"u", matrix_to_json(model.factors.u)},
                    {"o", matrix_to_json(model.factors.o)},
                    {"m", matrix_to_json(model.factors.m)}};

  out << doc.dump(2) << '\n';
}

void save_model(const ModelArtifact& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
}

ModelArtifact load_model(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model file is not valid JSON: ") + e.what());
  }

  try {
    if (doc.at("format").get<std::string>() != kFormatTag) {
      throw InvalidArgument("not a model file (unexpected format tag)");
    }
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw InvalidArgument("unsupported model format version");
    }

    ModelArtifact model;
    const auto& dims = doc.at("dims");
    model.dims = {dims.at(0).get<std::uint32_t>(), dims.at(1).get<std::uint32_t>(),
                  dims.at(2).get<std::uint32_t>()};
    const int rank = doc.at("rank").get<int>();
    if (rank < 1) throw InvalidArgument("model rank must be positive");
    model.seed = doc.at("seed").get<std::uint64_t>();

    const auto& h = doc.at("hyper");
    model.hyper.eta = h.at("eta").get<double>();
    model.hyper.lambda = h.at("lambda").get<double>();
    model.hyper.c_i = h.at("c_i").get<double>();
    model.hyper.c_d = h.at("c_d").get<double>();
    model.hyper.alpha = h.at("alpha").get<double>();
    model.hyper.rank = h.at("rank").get<int>();
    model.hyper.max_epochs = h.at("max_epochs").get<int>();
    model.hyper.tol = h.at("tol").get<double>();
    model.hyper.reg_mode = reg_mode_from_string(h.at("reg_mode").get<std::string>());
    model.hyper.stop_metric = stop_metric_from_string(h.at("stop_metric").get<std::string>());
    model.hyper.first_visit_derivative =
        first_visit_derivative_from_string(h.at("first_visit_derivative").get<std::string>());

    if (!doc.at("scaling").is_null()) {
      const auto& s = doc.at("scaling");
      model.scaling = ScalingParams{s.at("y_min").get<double>(), s.at("y_max").get<double>(),
                                    s.at("target_max").get<double>()};
    }

    const auto& factors = doc.at("factors");
    model.factors.u = matrix_from_json(factors.at("u"), model.dims.time_steps, rank, "u");
    model.factors.o = matrix_from_json(factors.at("o"), model.dims.meters, rank, "o");
    model.factors.m = matrix_from_json(factors.at("m"), model.dims.days, rank, "m");
    return model;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model file is missing fields: ") + e.what());
  }
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return load_model(in);
}

}  // namespace pidtf
