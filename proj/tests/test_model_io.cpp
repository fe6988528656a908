#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pidtf/errors.hpp"
#include "pidtf/model_io.hpp"
#include "pidtf/rng.hpp"

using namespace pidtf;

namespace {

ModelArtifact sample_model() {
  ModelArtifact model;
  model.dims = {6, 4, 3};
  model.factors = init_factors(model.dims, 5, 99);
  Rng rng(100);
  for (Matrix* mat : {&model.factors.u, &model.factors.o, &model.factors.m}) {
    for (double& v : mat->flat()) v = uniform_in(rng, -7.3, 4.1);
  }
  model.scaling = ScalingParams{1.25, 812.5, 10.0};
  model.hyper.eta = 0.07;
  model.hyper.lambda = 0.003;
  model.hyper.c_i = 0.45;
  model.hyper.c_d = 0.05;
  model.hyper.rank = 5;
  model.hyper.reg_mode = RegMode::paper;
  model.hyper.stop_metric = StopMetric::mae;
  model.seed = 123456789ULL;
  return model;
}

}  // namespace

TEST_CASE("model artifacts survive a save/load round trip bit for bit") {
  const ModelArtifact model = sample_model();
  std::stringstream buffer;
  save_model(model, buffer);

  const ModelArtifact back = load_model(buffer);
  CHECK(back.dims == model.dims);
  CHECK(back.factors == model.factors);  // exact doubles
  CHECK(back.scaling == model.scaling);
  CHECK(back.hyper == model.hyper);
  CHECK(back.seed == model.seed);
}

TEST_CASE("a model without scaling stays unscaled") {
  ModelArtifact model = sample_model();
  model.scaling.reset();
  std::stringstream buffer;
  save_model(model, buffer);
  const ModelArtifact back = load_model(buffer);
  CHECK_FALSE(back.scaling.has_value());
}

TEST_CASE("loading rejects foreign or broken documents") {
  std::istringstream not_json("factors: nope");
  CHECK_THROWS_AS(load_model(not_json), InvalidArgument);

  std::istringstream wrong_tag(R"({"format":"something-else","format_version":1})");
  CHECK_THROWS_AS(load_model(wrong_tag), InvalidArgument);

  std::istringstream missing_fields(R"({"format":"pidtf-model","format_version":1})");
  CHECK_THROWS_AS(load_model(missing_fields), InvalidArgument);

  // factor array shorter than dims * rank
  std::istringstream short_factors(R"({
    "format":"pidtf-model","format_version":1,"dims":[2,2,2],"rank":1,"seed":1,
    "hyper":{"eta":0.1,"lambda":0.0,"c_i":0.0,"c_d":0.0,"alpha":0.2,"rank":1,
             "max_epochs":1,"tol":0.0,"reg_mode":"analytic","stop_metric":"rmse",
             "first_visit_derivative":"zero"},
    "scaling":null,
    "factors":{"u":[0.5],"o":[0.5,0.5],"m":[0.5,0.5]}
  })");
  CHECK_THROWS_AS(load_model(short_factors), InvalidArgument);
}

TEST_CASE("missing files raise a useful error") {
  CHECK_THROWS_AS(load_model(std::filesystem::path("/nonexistent/model.json")), InvalidArgument);
}
