#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "pidtf/errors.hpp"
#include "pidtf/pid_optimizer.hpp"
#include "pidtf/rng.hpp"

using namespace pidtf;

namespace {

FactorSet random_factors(Dims dims, int rank, std::uint64_t seed) {
  FactorSet f(dims, rank);
  Rng rng(seed);
  for (Matrix* mat : {&f.u, &f.o, &f.m}) {
    for (double& v : mat->flat()) v = uniform_in(rng, -3.0, 1.0);
  }
  return f;
}

Hyperparams hyper_with(double eta, double c_i, double c_d, double alpha, double lambda = 0.0) {
  Hyperparams h;
  h.eta = eta;
  h.c_i = c_i;
  h.c_d = c_d;
  h.alpha = alpha;
  h.lambda = lambda;
  h.rank = 3;
  return h;
}

}  // namespace

TEST_CASE("discrete controller reference values") {
  const std::array<double, 3> constant{1.0, 1.0, 1.0};
  CHECK(discrete_pid(constant, 1.0, 0.5, 0.1) == 2.5);

  const std::array<double, 4> any{0.3, -0.2, 0.9, 0.4};
  CHECK(discrete_pid(any, 1.0, 0.0, 0.0) == 0.4);  // pure P passes the last error through

  const std::array<double, 2> ramp{0.5, 1.0};
  CHECK(discrete_pid(ramp, 0.0, 0.0, 1.0) == 0.5);  // pure D sees the change

  const std::array<double, 1> single{0.7};
  // first step: integral equals the error, derivative compares against 0
  CHECK(discrete_pid(single, 1.0, 1.0, 1.0) == doctest::Approx(0.7 + 0.7 + 0.7));

  CHECK_THROWS_AS(discrete_pid({}, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("pid_delta degenerates to the plain SGD step") {
  const Hyperparams h = hyper_with(0.05, 0.0, 0.0, 0.2);
  Rng rng(7);
  for (int n = 0; n < 100; ++n) {
    const double g = uniform_in(rng, -2.0, 2.0);
    const double stale_i = uniform_in(rng, -1.0, 1.0);
    const double stale_d = uniform_in(rng, -1.0, 1.0);
    CHECK(pid_delta(g, stale_i, stale_d, true, h) == h.eta * g);
  }
}

TEST_CASE("pid_delta combines the three terms") {
  const Hyperparams h = hyper_with(0.1, 0.3, 0.2, 0.2);
  // 0.1*1 + 0.3*0.2 + 0.2*(1 - 0.5)
  CHECK(pid_delta(1.0, 0.2, 0.5, true, h) == doctest::Approx(0.26).epsilon(1e-15));
}

TEST_CASE("first-visit derivative handling") {
  Hyperparams h = hyper_with(0.1, 0.0, 0.5, 0.2);
  // default: unvisited element gets no derivative kick regardless of d_prev
  CHECK(pid_delta(1.0, 0.0, 123.0, false, h) == h.eta * 1.0);
  // literal mode: d_prev is the stored zero, so the kick is c_d * g
  h.first_visit_derivative = FirstVisitDerivative::literal;
  CHECK(pid_delta(1.0, 0.0, 0.0, false, h) == doctest::Approx(0.1 + 0.5));
}

TEST_CASE("advance_state recurrence") {
  const auto adv = advance_state(0.2, 1.0, 0.2);
  CHECK(adv.integral == doctest::Approx(0.36).epsilon(1e-15));
  CHECK(adv.previous == 1.0);

  CHECK(advance_state(0.7, 2.0, 0.0).integral == 0.7);  // frozen integral
  CHECK(advance_state(0.7, 2.0, 1.0).integral == 2.0);  // memoryless
}

TEST_CASE("PI form reproduces momentum on a dyadic scalar trace") {
  // Momentum with decay gamma: v <- gamma*v - eta*g; theta <- theta + v.
  // With alpha = 1 - gamma and c_i = eta*gamma/alpha the controller update
  // using the pre-advance integral walks the same trajectory. Dyadic
  // constants keep every intermediate exact, so equality is bitwise.
  const double gamma = 0.5;
  const double eta = 0.25;
  const Hyperparams h = hyper_with(eta, eta * gamma / (1.0 - gamma), 0.0, 1.0 - gamma);
  const std::array<double, 3> grads{1.0, 0.5, 0.25};

  double theta_momentum = 1.0;
  double v = 0.0;
  double theta_pid = 1.0;
  double integral = 0.0;
  double previous = 0.0;
  bool visited = false;

  for (const double g : grads) {
    v = gamma * v - eta * g;
    theta_momentum += v;

    theta_pid -= pid_delta(g, integral, previous, visited, h);
    const auto adv = advance_state(integral, g, h.alpha);
    integral = adv.integral;
    previous = adv.previous;
    visited = true;

    CHECK(theta_pid == theta_momentum);
  }
}

TEST_CASE("zero-gain instance update equals a textbook SGD step") {
  auto f = random_factors({4, 3, 2}, 3, 17);
  const Hyperparams h = hyper_with(0.07, 0.0, 0.0, 0.2, 0.001);
  const Entry e{2, 1, 0, 1.4};

  const FactorSet before = f;
  const auto g = instance_gradients(before, e, h.lambda, h.reg_mode);

  ControllerState state(f.dims(), 3);
  apply_instance_update(f, state, e, h);

  for (int r = 0; r < 3; ++r) {
    CHECK(f.u(e.i, r) == before.u(e.i, r) - h.eta * g.u[r]);
    CHECK(f.o(e.j, r) == before.o(e.j, r) - h.eta * g.o[r]);
    CHECK(f.m(e.k, r) == before.m(e.k, r) - h.eta * g.m[r]);
  }
}

TEST_CASE("the second visit uses the first visit's gradient as d_prev") {
  auto f = random_factors({3, 3, 3}, 3, 23);
  const Hyperparams h = hyper_with(0.05, 0.3, 0.2, 0.2, 0.0);
  const Entry e{1, 1, 1, 2.0};
  ControllerState state(f.dims(), 3);

  const auto g1 = instance_gradients(f, e, h.lambda, h.reg_mode);
  apply_instance_update(f, state, e, h);

  const auto g2 = instance_gradients(f, e, h.lambda, h.reg_mode);
  const FactorSet before_second = f;
  apply_instance_update(f, state, e, h);

  for (int r = 0; r < 3; ++r) {
    // i_prev after the first visit is (1-alpha)*0 + alpha*g1
    const double i_prev = (1.0 - h.alpha) * 0.0 + h.alpha * g1.u[r];
    double expected = h.eta * g2.u[r];
    expected += h.c_i * i_prev;
    expected += h.c_d * (g2.u[r] - g1.u[r]);
    CHECK(f.u(e.i, r) == before_second.u(e.i, r) - expected);
  }
}

TEST_CASE("updates apply precomputed gradients, not interleaved ones") {
  // Against a manual two-pass application on a fresh state.
  auto engine = random_factors({4, 4, 4}, 3, 29);
  FactorSet manual = engine;
  const Hyperparams h = hyper_with(0.06, 0.4, 0.3, 0.2, 0.002);
  const Entry e{0, 2, 3, 1.1};

  ControllerState state(engine.dims(), 3);
  apply_instance_update(engine, state, e, h);

  const auto g = instance_gradients(manual, e, h.lambda, h.reg_mode);
  for (int r = 0; r < 3; ++r) {
    manual.u(e.i, r) -= pid_delta(g.u[r], 0.0, 0.0, false, h);
    manual.o(e.j, r) -= pid_delta(g.o[r], 0.0, 0.0, false, h);
    manual.m(e.k, r) -= pid_delta(g.m[r], 0.0, 0.0, false, h);
  }
  CHECK(engine == manual);
}

TEST_CASE("controller state always satisfies the recurrence (shadow bookkeeping)") {
  const Dims dims{5, 4, 3};
  auto f = random_factors(dims, 3, 31);
  const Hyperparams h = hyper_with(0.05, 0.3, 0.1, 0.2, 0.001);
  ControllerState state(dims, 3);

  Matrix shadow_iu(dims.time_steps, 3), shadow_du(dims.time_steps, 3);
  Matrix shadow_io(dims.meters, 3), shadow_do(dims.meters, 3);
  Matrix shadow_im(dims.days, 3), shadow_dm(dims.days, 3);

  Rng rng(32);
  for (int step = 0; step < 200; ++step) {
    const Entry e{static_cast<std::uint32_t>(draw_below(rng, dims.time_steps)),
                  static_cast<std::uint32_t>(draw_below(rng, dims.meters)),
                  static_cast<std::uint32_t>(draw_below(rng, dims.days)),
                  uniform_in(rng, 0.0, 3.0)};
    const auto g = instance_gradients(f, e, h.lambda, h.reg_mode);
    apply_instance_update(f, state, e, h);

    for (int r = 0; r < 3; ++r) {
      shadow_iu(e.i, r) = (1.0 - h.alpha) * shadow_iu(e.i, r) + h.alpha * g.u[r];
      shadow_du(e.i, r) = g.u[r];
      shadow_io(e.j, r) = (1.0 - h.alpha) * shadow_io(e.j, r) + h.alpha * g.o[r];
      shadow_do(e.j, r) = g.o[r];
      shadow_im(e.k, r) = (1.0 - h.alpha) * shadow_im(e.k, r) + h.alpha * g.m[r];
      shadow_dm(e.k, r) = g.m[r];
    }
  }
  CHECK(state.i_u == shadow_iu);
  CHECK(state.d_u == shadow_du);
  CHECK(state.i_o == shadow_io);
  CHECK(state.d_o == shadow_do);
  CHECK(state.i_m == shadow_im);
  CHECK(state.d_m == shadow_dm);
}

TEST_CASE("a blown-up update reports the offending element") {
  auto f = random_factors({2, 2, 2}, 3, 37);
  Hyperparams h = hyper_with(1e10, 0.0, 0.0, 0.2);
  ControllerState state(f.dims(), 3);
  const Entry e{0, 0, 0, 1e308};
  CHECK_THROWS_AS(apply_instance_update(f, state, e, h), NonFiniteUpdate);
  try {
    apply_instance_update(f, state, e, h);
  } catch (const NonFiniteUpdate& err) {
    CHECK(err.matrix == "U");
    CHECK(err.row == 0);
  }
}

TEST_CASE("state shape mismatch is rejected") {
  auto f = random_factors({3, 3, 3}, 3, 41);
  ControllerState wrong({3, 3, 3}, 2);
  const Hyperparams h = hyper_with(0.05, 0.1, 0.0, 0.2);
  CHECK_THROWS_AS(apply_instance_update(f, wrong, {0, 0, 0, 1.0}, h), InvalidArgument);
}
