#pragma once

// Test-side oracle for gradient checks: re-evaluates the single-instance
// loss with its own code and differentiates it numerically. Kept independent
// of the library's gradient path on purpose.

#include <cmath>
#include <cstdint>

#include "pidtf/factor_model.hpp"

namespace oracle {

inline double sig(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double t = std::exp(x);
  return t / (1.0 + t);
}

// 0.5 * [(y - yhat)^2 + lambda * sum_r (su^2 + so^2 + sm^2)]
inline double instance_loss(const pidtf::FactorSet& f, const pidtf::Entry& e, double lambda) {
  double yhat = 0.0;
  double reg = 0.0;
  for (int r = 0; r < f.rank(); ++r) {
    const double su = sig(f.u(e.i, r));
    const double so = sig(f.o(e.j, r));
    const double sm = sig(f.m(e.k, r));
    yhat += su * so * sm;
    reg += su * su + so * so + sm * sm;
  }
  const double eps = e.value - yhat;
  return 0.5 * (eps * eps + lambda * reg);
}

enum class Mode { U, O, M };

inline double central_diff(pidtf::FactorSet f, Mode which, std::uint32_t row, int r,
                           const pidtf::Entry& e, double lambda, double h = 1e-6) {
  pidtf::Matrix& mat = which == Mode::U ? f.u : which == Mode::O ? f.o : f.m;
  const double x0 = mat(row, r);
  mat(row, r) = x0 + h;
  const double up = instance_loss(f, e, lambda);
  mat(row, r) = x0 - h;
  const double down = instance_loss(f, e, lambda);
  return (up - down) / (2.0 * h);
}

// |a - b| within rel of the larger magnitude, with an absolute floor.
inline bool close_rel(double a, double b, double rel, double abs_floor) {
  const double diff = std::abs(a - b);
  if (diff <= abs_floor) return true;
  return diff <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
