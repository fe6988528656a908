#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pidtf/errors.hpp"
#include "pidtf/factor_model.hpp"
#include "pidtf/rng.hpp"
#include "support/finite_diff.hpp"

using namespace pidtf;

namespace {

FactorSet random_factors(Dims dims, int rank, std::uint64_t seed, double lo = -4.0,
                         double hi = 4.0) {
  FactorSet f(dims, rank);
  Rng rng(seed);
  for (Matrix* mat : {&f.u, &f.o, &f.m}) {
    for (double& v : mat->flat()) v = uniform_in(rng, lo, hi);
  }
  return f;
}

}  // namespace

TEST_CASE("sigmoid fixed points") {
  CHECK(sigmoid(0.0) == 0.5);
  // high-precision value of 1 / (1 + e^2)
  CHECK(sigmoid(-2.0) == doctest::Approx(0.11920292202211755).epsilon(1e-14));
}

TEST_CASE("sigmoid symmetry and monotonicity") {
  Rng rng(5);
  double prev = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double x = uniform_in(rng, -30.0, 30.0);
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  // strictly monotone until double precision saturates near |x| ~ 36
  for (double x = -30.0; x <= 30.0; x += 0.5) {
    const double s = sigmoid(x);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("sigmoid survives extreme arguments") {
  CHECK(sigmoid(709.0) == 1.0);
  CHECK(sigmoid(-709.0) > 0.0);
  CHECK(sigmoid(-709.0) < 1e-300);
  CHECK(std::isfinite(sigmoid(709.0)));
  CHECK(std::isfinite(sigmoid(-709.0)));
}

TEST_CASE("init_factors draws raw values in the documented range") {
  const auto f = init_factors({30, 20, 10}, 6, 42);
  for (const Matrix* mat : {&f.u, &f.o, &f.m}) {
    for (double v : mat->flat()) {
      CHECK(v >= -3.0);
      CHECK(v <= -2.0);
      const double s = sigmoid(v);
      CHECK(s > 0.047);
      CHECK(s < 0.120);
    }
  }
}

TEST_CASE("init_factors is seed-deterministic") {
  const auto a = init_factors({8, 6, 4}, 3, 7);
  const auto b = init_factors({8, 6, 4}, 3, 7);
  const auto c = init_factors({8, 6, 4}, 3, 8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("predict on all-zero raw factors") {
  FactorSet f1({2, 2, 2}, 1);
  CHECK(predict(f1, 0, 0, 0) == 0.125);  // sigmoid(0)^3

  FactorSet f2({2, 2, 2}, 2);
  CHECK(predict(f2, 1, 1, 1) == 0.25);
}

TEST_CASE("predict matches a term-by-term recomputation") {
  const auto f = random_factors({9, 7, 5}, 3, 21);
  Rng rng(22);
  for (int n = 0; n < 50; ++n) {
    const auto i = static_cast<std::uint32_t>(draw_below(rng, 9));
    const auto j = static_cast<std::uint32_t>(draw_below(rng, 7));
    const auto k = static_cast<std::uint32_t>(draw_below(rng, 5));
    double expected = 0.0;
    for (int r = 0; r < 3; ++r) {
      expected += oracle::sig(f.u(i, r)) * oracle::sig(f.o(j, r)) * oracle::sig(f.m(k, r));
    }
    CHECK(std::abs(predict(f, i, j, k) - expected) < 1e-12);
  }
}

TEST_CASE("predict stays inside (0, rank) and checks bounds") {
  const auto f = random_factors({6, 6, 6}, 4, 33, -30.0, 30.0);
  for (std::uint32_t i = 0; i < 6; ++i) {
    for (std::uint32_t j = 0; j < 6; ++j) {
      for (std::uint32_t k = 0; k < 6; ++k) {
        const double p = predict(f, i, j, k);
        CHECK(p > 0.0);
        CHECK(p < 4.0);
      }
    }
  }
  CHECK_THROWS_AS(predict(f, 6, 0, 0), IndexOutOfRange);
  CHECK_THROWS_AS(predict(f, 0, 0, 17), IndexOutOfRange);
}

TEST_CASE("objective on an exactly fitted entry") {
  FactorSet f({1, 1, 1}, 1);  // raw zeros, prediction 0.125
  const Entry fitted{0, 0, 0, 0.125};
  CHECK(objective(f, std::span(&fitted, 1), 0.0) == 0.0);
  // 0.5 * 0.01 * 3 * 0.25
  CHECK(objective(f, std::span(&fitted, 1), 0.01) == doctest::Approx(0.00375).epsilon(1e-12));
}

TEST_CASE("objective matches an independent summation") {
  const auto f = random_factors({10, 8, 6}, 4, 55);
  Rng rng(56);
  std::vector<Entry> entries;
  for (int n = 0; n < 20; ++n) {
    entries.push_back({static_cast<std::uint32_t>(draw_below(rng, 10)),
                       static_cast<std::uint32_t>(draw_below(rng, 8)),
                       static_cast<std::uint32_t>(draw_below(rng, 6)),
                       uniform_in(rng, 0.0, 4.0)});
  }
  for (const double lambda : {0.0, 0.001, 0.05}) {
    double expected = 0.0;
    for (const Entry& e : entries) expected += oracle::instance_loss(f, e, lambda);
    const double got = objective(f, entries, lambda);
    CHECK(std::abs(got - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("gradients vanish on a fitted instance without regularization") {
  const auto f = random_factors({4, 4, 4}, 3, 77);
  const Entry e{1, 2, 3, predict(f, 1, 2, 3)};
  const auto g = instance_gradients(f, e, 0.0, RegMode::analytic);
  for (int r = 0; r < 3; ++r) {
    CHECK(g.u[r] == 0.0);
    CHECK(g.o[r] == 0.0);
    CHECK(g.m[r] == 0.0);
  }
}

TEST_CASE("gradient hand value at the origin") {
  FactorSet f({1, 1, 1}, 1);
  const Entry e{0, 0, 0, 1.125};  // eps = 1 against prediction 0.125
  const auto g = instance_gradients(f, e, 0.0, RegMode::analytic);
  CHECK(g.u[0] == -0.0625);  // -1 * 0.25 * 0.5 * 0.5
  CHECK(g.o[0] == -0.0625);
  CHECK(g.m[0] == -0.0625);
}

TEST_CASE("paper-mode regularization carries the trailing raw factor") {
  FactorSet f({1, 1, 1}, 1);  // raw zeros
  const Entry e{0, 0, 0, 0.125};  // eps = 0
  const auto g = instance_gradients(f, e, 1.0, RegMode::paper);
  // data term 0, reg term lambda * s(1-s) * x with x = 0
  CHECK(g.u[0] == 0.0);

  // at a nonzero raw value the two modes genuinely differ
  FactorSet f2({1, 1, 1}, 1);
  f2.u(0, 0) = 1.0;
  const Entry e2{0, 0, 0, predict(f2, 0, 0, 0)};
  const auto paper = instance_gradients(f2, e2, 1.0, RegMode::paper);
  const auto analytic = instance_gradients(f2, e2, 1.0, RegMode::analytic);
  CHECK(paper.u[0] != analytic.u[0]);
}

TEST_CASE("modes agree exactly when lambda is zero") {
  const auto f = random_factors({5, 5, 5}, 4, 88);
  Rng rng(89);
  for (int n = 0; n < 25; ++n) {
    const Entry e{static_cast<std::uint32_t>(draw_below(rng, 5)),
                  static_cast<std::uint32_t>(draw_below(rng, 5)),
                  static_cast<std::uint32_t>(draw_below(rng, 5)), uniform_in(rng, 0.0, 4.0)};
    const auto a = instance_gradients(f, e, 0.0, RegMode::analytic);
    const auto p = instance_gradients(f, e, 0.0, RegMode::paper);
    CHECK(a.u == p.u);
    CHECK(a.o == p.o);
    CHECK(a.m == p.m);
  }
}

TEST_CASE("analytic gradients agree with central finite differences") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_factors({6, 5, 4}, 3, rng());
    const Entry e{static_cast<std::uint32_t>(draw_below(rng, 6)),
                  static_cast<std::uint32_t>(draw_below(rng, 5)),
                  static_cast<std::uint32_t>(draw_below(rng, 4)), uniform_in(rng, 0.0, 3.0)};
    const double lambda = trial % 3 == 0 ? 0.0 : trial % 3 == 1 ? 0.001 : 0.01;
    const auto g = instance_gradients(f, e, lambda, RegMode::analytic);
    for (int r = 0; r < 3; ++r) {
      const double fd_u = oracle::central_diff(f, oracle::Mode::U, e.i, r, e, lambda);
      const double fd_o = oracle::central_diff(f, oracle::Mode::O, e.j, r, e, lambda);
      const double fd_m = oracle::central_diff(f, oracle::Mode::M, e.k, r, e, lambda);
      CHECK(oracle::close_rel(g.u[r], fd_u, 1e-6, 1e-9));
      CHECK(oracle::close_rel(g.o[r], fd_o, 1e-6, 1e-9));
      CHECK(oracle::close_rel(g.m[r], fd_m, 1e-6, 1e-9));
    }
  }
}

TEST_CASE("permuting the modes permutes the gradient triplet") {
  const auto f = random_factors({5, 4, 3}, 3, 202);
  Rng rng(203);
  for (int n = 0; n < 20; ++n) {
    const Entry e{static_cast<std::uint32_t>(draw_below(rng, 5)),
                  static_cast<std::uint32_t>(draw_below(rng, 4)),
                  static_cast<std::uint32_t>(draw_below(rng, 3)), uniform_in(rng, 0.0, 3.0)};
    const auto g = instance_gradients(f, e, 0.01, RegMode::analytic);

    FactorSet rotated;
    rotated.u = f.o;
    rotated.o = f.m;
    rotated.m = f.u;
    const Entry rotated_entry{e.j, e.k, e.i, e.value};
    const auto rg = instance_gradients(rotated, rotated_entry, 0.01, RegMode::analytic);
    // equal up to the prediction's multiplication regrouping (a few ulps)
    const auto near = [](const std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t r = 0; r < a.size(); ++r) {
        if (std::abs(a[r] - b[r]) >
            1e-13 * std::max({std::abs(a[r]), std::abs(b[r]), 1e-30})) {
          return false;
        }
      }
      return true;
    };
    CHECK(near(rg.u, g.o));
    CHECK(near(rg.o, g.m));
    CHECK(near(rg.m, g.u));
  }
}

TEST_CASE("hyperparameter validation enforces every bound") {
  Hyperparams h;
  CHECK_NOTHROW(h.validate());
  auto expect_invalid = [](Hyperparams bad) { CHECK_THROWS_AS(bad.validate(), InvalidArgument); };
  Hyperparams bad = h;
  bad.eta = 0.0;
  expect_invalid(bad);
  bad = h;
  bad.lambda = -0.1;
  expect_invalid(bad);
  bad = h;
  bad.c_i = -1.0;
  expect_invalid(bad);
  bad = h;
  bad.c_d = -1.0;
  expect_invalid(bad);
  bad = h;
  bad.alpha = 1.5;
  expect_invalid(bad);
  bad = h;
  bad.rank = 0;
  expect_invalid(bad);
  bad = h;
  bad.max_epochs = -1;
  expect_invalid(bad);
  bad = h;
  bad.tol = -1e-9;
  expect_invalid(bad);
}

TEST_CASE("enum string round trips") {
  CHECK(reg_mode_from_string(to_string(RegMode::paper)) == RegMode::paper);
  CHECK(stop_metric_from_string(to_string(StopMetric::mae)) == StopMetric::mae);
  CHECK(first_visit_derivative_from_string(to_string(FirstVisitDerivative::literal)) ==
        FirstVisitDerivative::literal);
  CHECK_THROWS_AS(reg_mode_from_string("bogus"), InvalidArgument);
}
