#include "pidtf/pid_optimizer.hpp"

#include <cmath>

#include "pidtf/errors.hpp"

namespace pidtf {

double discrete_pid(std::span<const double> error_history, double c_p, double c_i, double c_d) {
  if (error_history.empty()) throw InvalidArgument("error history must be nonempty");
  double accumulated = 0.0;
  for (double e : error_history) accumulated += e;
  const double current = error_history.back();
  const double previous = error_history.size() > 1 ? error_history[error_history.size() - 2] : 0.0;
  return c_p * current + c_i * accumulated + c_d * (current - previous);
}

double pid_delta(double g, double i_prev, double d_prev, bool visited, const Hyperparams& hyper) {
  double delta = hyper.eta * g;
  // Gains are gated on zero so the degenerate configuration reproduces a
  // plain SGD step bit for bit.
  if (hyper.c_i != 0.0) {
    delta += hyper.c_i * i_prev;
  }
  if (hyper.c_d != 0.0 &&
      (visited || hyper.first_visit_derivative == FirstVisitDerivative::literal)) {
    delta += hyper.c_d * (g - d_prev);
  }
  return delta;
}

StateAdvance advance_state(double i_prev, double g, double alpha) {
  return {(1.0 - alpha) * i_prev + alpha * g, g};
}

namespace {

// Moves one element and advances its controller cells. The delta reads the
// pre-advance state; each element is touched once per instance, so applying
// and advancing per element is equivalent to the two-phase order.
inline void step_element(double& value, Matrix& integral, Matrix& previous, Mask& visited,
                         std::uint32_t row, int r, double g, const Hyperparams& hyper,
                         const char* matrix_name) {
  const double next =
      value - pid_delta(g, integral(row, r), previous(row, r), visited.test(row, r), hyper);
  if (!std::isfinite(next)) {
    throw NonFiniteUpdate(matrix_name, row, r);
  }
  value = next;
  const StateAdvance adv = advance_state(integral(row, r), g, hyper.alpha);
  integral(row, r) = adv.integral;
  previous(row, r) = adv.previous;
  visited.set(row, r);
}

}  // namespace

void apply_instance_update(FactorSet& factors, ControllerState& state, const Entry& entry,
                           const Hyperparams& hyper, UpdateScratch& scratch) {
  if (!state.shape_matches(factors)) {
    throw InvalidArgument("controller state shape does not match the factors");
  }
  // All 3R gradients come from the pre-update factor values.
  instance_gradients_into(factors, entry, hyper.lambda, hyper.reg_mode, scratch);

  const int rank = factors.rank();
  for (int r = 0; r < rank; ++r) {
    step_element(factors.u(entry.i, r), state.i_u, state.d_u, state.visited_u, entry.i, r,
                 scratch.gu[r], hyper, "U");
    step_element(factors.o(entry.j, r), state.i_o, state.d_o, state.visited_o, entry.j, r,
                 scratch.go[r], hyper, "O");
    step_element(factors.m(entry.k, r), state.i_m, state.d_m, state.visited_m, entry.k, r,
                 scratch.gm[r], hyper, "M");
  }
}

void apply_instance_update(FactorSet& factors, ControllerState& state, const Entry& entry,
                           const Hyperparams& hyper) {
  UpdateScratch scratch;
  apply_instance_update(factors, state, entry, hyper, scratch);
}

}  // namespace pidtf
