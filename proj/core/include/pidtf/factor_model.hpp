#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidtf/defaults.hpp"
#include "pidtf/matrix.hpp"
#include "pidtf/sparse_tensor.hpp"

namespace pidtf {

/// Which regularization gradient to use. `analytic` is the exact derivative
/// of the sigmoid-squared penalty, lambda * s^2 * (1 - s) with s = sigmoid(x).
/// `paper` uses lambda * s * (1 - s) * x instead, kept for replication runs.
/// The two agree exactly when lambda is 0.
enum class RegMode { analytic, paper };

/// Which validation metric drives the convergence test.
enum class StopMetric { rmse, mae };

/// Handling of the derivative term the first time an element is updated:
/// `zero` suppresses it (no previous gradient exists yet), `literal` treats
/// the previous gradient as the 0 the D store was initialized with.
enum class FirstVisitDerivative { zero, literal };

const char* to_string(RegMode mode);
const char* to_string(StopMetric metric);
const char* to_string(FirstVisitDerivative mode);
RegMode reg_mode_from_string(std::string_view s);
StopMetric stop_metric_from_string(std::string_view s);
FirstVisitDerivative first_visit_derivative_from_string(std::string_view s);

/// Training configuration. eta serves as the proportional gain; there is no
/// separate C_P.
struct Hyperparams {
  double eta = defaults::kEta;
  double lambda = defaults::kLambda;
  double c_i = defaults::kCi;
  double c_d = defaults::kCd;
  double alpha = defaults::kAlpha;
  int rank = defaults::kRank;
  int max_epochs = defaults::kMaxEpochs;
  double tol = defaults::kTol;
  RegMode reg_mode = RegMode::analytic;
  StopMetric stop_metric = StopMetric::rmse;
  FirstVisitDerivative first_visit_derivative = FirstVisitDerivative::zero;

  /// Throws InvalidArgument when any bound is violated (eta > 0, lambda >= 0,
  /// c_i >= 0, c_d >= 0, alpha in [0,1], rank >= 1, max_epochs >= 0, tol >= 0).
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Logistic function 1 / (1 + e^-x), branch-stable for any finite x.
/// Output lies in (0, 1); in double precision it saturates to exactly 0 or 1
/// for |x| beyond roughly 37 and 745.
double sigmoid(double x);

/// The three latent feature matrices, stored raw (pre-sigmoid):
/// u is |I| x R, o is |J| x R, m is |K| x R.
struct FactorSet {
  Matrix u;
  Matrix o;
  Matrix m;

  FactorSet() = default;
  FactorSet(Dims dims, int rank)
      : u(dims.time_steps, rank), o(dims.meters, rank), m(dims.days, rank) {}

  int rank() const { return static_cast<int>(u.cols()); }
  Dims dims() const {
    return {static_cast<std::uint32_t>(u.rows()), static_cast<std::uint32_t>(o.rows()),
            static_cast<std::uint32_t>(m.rows())};
  }

  bool all_finite() const;

  friend bool operator==(const FactorSet&, const FactorSet&) = default;
};

/// Raw entries drawn uniformly from [defaults::kInitLow, defaults::kInitHigh]
/// with the seeded generator.
FactorSet init_factors(Dims dims, int rank, std::uint64_t seed);

/// Model prediction sum_r sigmoid(u_ir) * sigmoid(o_jr) * sigmoid(m_kr),
/// accumulated in ascending r. Always in (0, rank). Bounds-checked.
double predict(const FactorSet& factors, std::uint32_t i, std::uint32_t j, std::uint32_t k);

/// Regularized squared loss over the given entries:
/// 0.5 * sum [ (y - yhat)^2 + lambda * sum_r (s(u)^2 + s(o)^2 + s(m)^2) ].
double objective(const FactorSet& factors, std::span<const Entry> entries, double lambda);

/// Gradients of the single-instance loss with respect to the 3R raw factor
/// entries the instance touches. Component r of `u` is
///   -eps * s'(u_ir) * (s(o_jr) * s(m_kr)) + reg,
/// with eps = y - yhat, s'(x) = s(x) * (1 - s(x)), and reg chosen by RegMode.
struct InstanceGradients {
  std::vector<double> u;
  std::vector<double> o;
  std::vector<double> m;
};

InstanceGradients instance_gradients(const FactorSet& factors, const Entry& entry, double lambda,
                                     RegMode mode);

/// Reusable buffers for the per-instance hot path.
struct UpdateScratch {
  std::vector<double> su, so, sm;  // cached sigmoids per r
  std::vector<double> gu, go, gm;  // gradients per r

  void resize(int rank) {
    const auto n = static_cast<std::size_t>(rank);
    su.resize(n); so.resize(n); sm.resize(n);
    gu.resize(n); go.resize(n); gm.resize(n);
  }
};

/// Allocation-free variant: fills scratch.gu/go/gm (and the sigmoid caches)
/// and returns the instance error eps = y - yhat.
double instance_gradients_into(const FactorSet& factors, const Entry& entry, double lambda,
                               RegMode mode, UpdateScratch& scratch);

/// Throws IndexOutOfRange unless (i, j, k) addresses a valid cell.
void check_cell(const Dims& dims, std::uint32_t i, std::uint32_t j, std::uint32_t k);

}  // namespace pidtf
