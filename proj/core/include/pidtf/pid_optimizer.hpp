#pragma once

#include <cstdint>
#include <span>

#include "pidtf/factor_model.hpp"
#include "pidtf/matrix.hpp"

namespace pidtf {

/// Per-element optimizer state, shaped like the FactorSet it drives.
/// i_* hold the decayed gradient accumulators, d_* the previous gradient of
/// each element, visited_* whether an element has been updated at least once.
/// The accumulators obey i_new = (1 - alpha) * i_old + alpha * g after every
/// update; "time" is per-element update visits, not epochs.
struct ControllerState {
  Matrix i_u, i_o, i_m;
  Matrix d_u, d_o, d_m;
  Mask visited_u, visited_o, visited_m;

  ControllerState() = default;
  ControllerState(Dims dims, int rank)
      : i_u(dims.time_steps, rank),
        i_o(dims.meters, rank),
        i_m(dims.days, rank),
        d_u(dims.time_steps, rank),
        d_o(dims.meters, rank),
        d_m(dims.days, rank),
        visited_u(dims.time_steps, rank),
        visited_o(dims.meters, rank),
        visited_m(dims.days, rank) {}

  bool shape_matches(const FactorSet& factors) const {
    return i_u.same_shape(factors.u) && i_o.same_shape(factors.o) && i_m.same_shape(factors.m);
  }
};

/// Textbook discrete controller over an error history:
///   c_p * e_t + c_i * sum_i e_i + c_d * (e_t - e_{t-1}),
/// with e_0 taken as 0. Reference implementation for tests and docs; the
/// training loop uses pid_delta/advance_state instead.
double discrete_pid(std::span<const double> error_history, double c_p, double c_i, double c_d);

/// The update magnitude for one element given its gradient g and prior state:
///   eta * g + c_i * i_prev + c_d * (g - d_prev),
/// where the derivative term is dropped on the element's first update when
/// first_visit_derivative is `zero` (the default). Zero gains degrade this to
/// a plain SGD step of exactly eta * g.
double pid_delta(double g, double i_prev, double d_prev, bool visited, const Hyperparams& hyper);

/// State transition after an update with gradient g.
struct StateAdvance {
  double integral;  // (1 - alpha) * i_prev + alpha * g
  double previous;  // g
};

StateAdvance advance_state(double i_prev, double g, double alpha);

/// One stochastic step on a single training instance. All 3R gradients are
/// computed from the pre-update factor values, then each touched element is
/// moved by its pid_delta (which reads the pre-advance state) and its state
/// cells advance. Throws NonFiniteUpdate naming the first element whose new
/// value is not finite.
void apply_instance_update(FactorSet& factors, ControllerState& state, const Entry& entry,
                           const Hyperparams& hyper, UpdateScratch& scratch);

/// Convenience overload that allocates its own scratch.
void apply_instance_update(FactorSet& factors, ControllerState& state, const Entry& entry,
                           const Hyperparams& hyper);

}  // namespace pidtf
