#include "pidtf/factor_model.hpp"

#include <cmath>
#include <string>

#include "pidtf/errors.hpp"
#include "pidtf/rng.hpp"

namespace pidtf {

const char* to_string(RegMode mode) {
  return mode == RegMode::analytic ? "analytic" : "paper";
}

const char* to_string(StopMetric metric) {
  return metric == StopMetric::rmse ? "rmse" : "mae";
}

const char* to_string(FirstVisitDerivative mode) {
  return mode == FirstVisitDerivative::zero ? "zero" : "literal";
}

RegMode reg_mode_from_string(std::string_view s) {
  if (s == "analytic") return RegMode::analytic;
  if (s == "paper") return RegMode::paper;
  throw InvalidArgument("unknown reg_mode '" + std::string(s) + "'");
}

StopMetric stop_metric_from_string(std::string_view s) {
  if (s == "rmse") return StopMetric::rmse;
  if (s == "mae") return StopMetric::mae;
  throw InvalidArgument("unknown stop_metric '" + std::string(s) + "'");
}

FirstVisitDerivative first_visit_derivative_from_string(std::string_view s) {
  if (s == "zero") return FirstVisitDerivative::zero;
  if (s == "literal") return FirstVisitDerivative::literal;
  throw InvalidArgument("unknown first_visit_derivative '" + std::string(s) + "'");
}

void Hyperparams::validate() const {
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  if (lambda < 0.0) throw InvalidArgument("lambda must be non-negative");
  if (c_i < 0.0) throw InvalidArgument("c_i must be non-negative");
  if (c_d < 0.0) throw InvalidArgument("c_d must be non-negative");
  if (alpha < 0.0 || alpha > 1.0) throw InvalidArgument("alpha must lie in [0, 1]");
  if (rank < 1) throw InvalidArgument("rank must be at least 1");
  if (max_epochs < 0) throw InvalidArgument("max_epochs must be non-negative");
  if (tol < 0.0) throw InvalidArgument("tol must be non-negative");
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double t = std::exp(x);
  return t / (1.0 + t);
}

bool FactorSet::all_finite() const {
  for (const Matrix* mat : {&u, &o, &m}) {
    for (double v : mat->flat()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

FactorSet init_factors(Dims dims, int rank, std::uint64_t seed) {
  if (rank < 1) throw InvalidArgument("rank must be at least 1");
  FactorSet factors(dims, rank);
  Rng rng(seed);
  for (Matrix* mat : {&factors.u, &factors.o, &factors.m}) {
    for (double& v : mat->flat()) {
      v = uniform_in(rng, defaults::kInitLow, defaults::kInitHigh);
    }
  }
  return factors;
}

void check_cell(const Dims& dims, std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  if (i >= dims.time_steps || j >= dims.meters || k >= dims.days) {
    throw IndexOutOfRange("cell (" + std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(k) + ") outside dims");
  }
}

double predict(const FactorSet& factors, std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  check_cell(factors.dims(), i, j, k);
  const int rank = factors.rank();
  double yhat = 0.0;
  for (int r = 0; r < rank; ++r) {
    yhat += sigmoid(factors.u(i, r)) * sigmoid(factors.o(j, r)) * sigmoid(factors.m(k, r));
  }
  return yhat;
}

double objective(const FactorSet& factors, std::span<const Entry> entries, double lambda) {
  if (lambda < 0.0) throw InvalidArgument("lambda must be non-negative");
  const int rank = factors.rank();
  const Dims dims = factors.dims();
  double total = 0.0;
  for (const Entry& e : entries) {
    check_cell(dims, e.i, e.j, e.k);
    double yhat = 0.0;
    double reg = 0.0;
    for (int r = 0; r < rank; ++r) {
      const double su = sigmoid(factors.u(e.i, r));
      const double so = sigmoid(factors.o(e.j, r));
      const double sm = sigmoid(factors.m(e.k, r));
      yhat += su * so * sm;
      reg += su * su + so * so + sm * sm;
    }
    const double eps = e.value - yhat;
    total += eps * eps + lambda * reg;
  }
  return 0.5 * total;
}

namespace {

// Gradient of the single-instance loss w.r.t. one raw factor entry.
// s_self = sigmoid(raw_self); other = product of the two partner sigmoids.
inline double gradient_component(double s_self, double other, double raw_self, double eps,
                                 double lambda, RegMode mode) {
  const double slope = s_self * (1.0 - s_self);
  double g = -eps * slope * other;
  if (lambda != 0.0) {
    if (mode == RegMode::analytic) {
      g += lambda * s_self * s_self * (1.0 - s_self);
    } else {
      g += lambda * slope * raw_self;
    }
  }
  return g;
}

}  // namespace

double instance_gradients_into(const FactorSet& factors, const Entry& entry, double lambda,
                               RegMode mode, UpdateScratch& scratch) {
  check_cell(factors.dims(), entry.i, entry.j, entry.k);
  const int rank = factors.rank();
  scratch.resize(rank);

  double yhat = 0.0;
  for (int r = 0; r < rank; ++r) {
    scratch.su[r] = sigmoid(factors.u(entry.i, r));
    scratch.so[r] = sigmoid(factors.o(entry.j, r));
    scratch.sm[r] = sigmoid(factors.m(entry.k, r));
    yhat += scratch.su[r] * scratch.so[r] * scratch.sm[r];
  }
  const double eps = entry.value - yhat;

  for (int r = 0; r < rank; ++r) {
    const double su = scratch.su[r];
    const double so = scratch.so[r];
    const double sm = scratch.sm[r];
    scratch.gu[r] = gradient_component(su, so * sm, factors.u(entry.i, r), eps, lambda, mode);
    scratch.go[r] = gradient_component(so, su * sm, factors.o(entry.j, r), eps, lambda, mode);
    scratch.gm[r] = gradient_component(sm, su * so, factors.m(entry.k, r), eps, lambda, mode);
  }
  return eps;
}

InstanceGradients instance_gradients(const FactorSet& factors, const Entry& entry, double lambda,
                                     RegMode mode) {
  UpdateScratch scratch;
  instance_gradients_into(factors, entry, lambda, mode, scratch);
  return {std::move(scratch.gu), std::move(scratch.go), std::move(scratch.gm)};
}

}  // namespace pidtf
