#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ocs/errors.hpp"
#include "ocs/spsa.hpp"

using namespace ocs;

namespace {

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("gain schedules at the default hyper-parameters") {
  const SpsaConfig cfg;
  const auto g1 = gain_schedules(cfg, 1);
  CHECK(g1.a == doctest::Approx(0.16 / std::pow(201.0, 0.6)).epsilon(1e-15));
  CHECK(g1.a == doctest::Approx(0.006637).epsilon(1e-3));
  CHECK(g1.c == 0.35);
  double prev_a = g1.a, prev_c = g1.c;
  for (int j = 2; j < 2000; j += 7) {
    const auto g = gain_schedules(cfg, j);
    CHECK(g.a > 0.0);
    CHECK(g.c > 0.0);
    CHECK(g.a <= prev_a);
    CHECK(g.c <= prev_c);
    prev_a = g.a;
    prev_c = g.c;
  }
  CHECK(gain_schedules(cfg, 1000000000).a < 1e-6);
  CHECK_THROWS_AS(gain_schedules(cfg, 0), ContractError);
}

TEST_CASE("gamma zero gives a flat c schedule") {
  SpsaConfig cfg;
  cfg.gamma = 0.0;
  for (int j : {1, 10, 500}) CHECK(gain_schedules(cfg, j).c == cfg.c);
}

TEST_CASE("perturbations are fair +/-1 draws") {
  PerturbationSource rng(42);
  const std::size_t dim = 84;
  const int draws = 100000;
  std::vector<double> mean(dim, 0.0);
  long not_sign = 0;
  for (int n = 0; n < draws; ++n) {
    const auto d = perturbation(dim, rng);
    REQUIRE(d.size() == dim);
    for (std::size_t k = 0; k < dim; ++k) {
      not_sign += std::abs(d[k]) != 1.0;
      mean[k] += d[k] / draws;
    }
  }
  CHECK(not_sign == 0);
  for (double m : mean) CHECK(std::abs(m) < 0.02);
  CHECK_THROWS_AS(perturbation(0, rng), ContractError);
}

TEST_CASE("same seed, same perturbation sequence") {
  PerturbationSource a(9), b(9), c(10);
  bool differs = false;
  for (int n = 0; n < 50; ++n) {
    const auto da = perturbation(37, a);
    CHECK(da == perturbation(37, b));
    differs = differs || da != perturbation(37, c);
  }
  CHECK(differs);
}

TEST_CASE("gradient estimate on a quadratic") {
  int calls = 0;
  const Objective f = [&](std::span<const double> x) {
    ++calls;
    return sum_sq(x);
  };
  const std::vector<double> x{3.0, 0.0};
  const std::vector<double> delta{1.0, 1.0};
  const auto est = estimate_gradient(f, x, 0.1, delta);
  REQUIRE(est.ok);
  CHECK(est.g[0] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(est.g[1] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(calls == 2);

  const auto half = estimate_gradient(f, x, 0.05, delta);
  CHECK(half.g[0] == doctest::Approx(est.g[0]).epsilon(1e-12));
  CHECK(half.g[1] == doctest::Approx(est.g[1]).epsilon(1e-12));
}

TEST_CASE("two objective calls per estimate whatever the dimension") {
  for (std::size_t dim : {1u, 10u, 84u, 1000u}) {
    int calls = 0;
    const Objective f = [&](std::span<const double> x) {
      ++calls;
      return sum_sq(x);
    };
    PerturbationSource rng(dim);
    const std::vector<double> x(dim, 0.5);
    estimate_gradient(f, x, 0.1, perturbation(dim, rng));
    CHECK(calls == 2);
  }
}

TEST_CASE("estimate of a linear function averages to its gradient") {
  const std::vector<double> w{1.5, -2.0, 0.25, 4.0, -0.5};
  const Objective f = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * x[k];
    return s;
  };
  PerturbationSource rng(5);
  const std::vector<double> x(w.size(), 1.0);
  const int draws = 20000;
  std::vector<double> mean(w.size(), 0.0), sq(w.size(), 0.0);
  for (int n = 0; n < draws; ++n) {
    const auto est = estimate_gradient(f, x, 0.2, perturbation(w.size(), rng));
    for (std::size_t k = 0; k < w.size(); ++k) {
      mean[k] += est.g[k] / draws;
      sq[k] += est.g[k] * est.g[k] / draws;
    }
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double se = std::sqrt((sq[k] - mean[k] * mean[k]) / draws);
    CHECK(std::abs(mean[k] - w[k]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("non-finite probes ask for a new perturbation") {
  const Objective f = [](std::span<const double> x) {
    return x[0] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  const std::vector<double> x{0.0}, delta{1.0};
  CHECK_FALSE(estimate_gradient(f, x, 0.1, delta).ok);
  CHECK_THROWS_AS(estimate_gradient(f, x, 0.1, std::vector<double>{1.0, 1.0}), ContractError);
}

TEST_CASE("update is x minus a_j times the estimate") {
  const std::vector<double> x{1.0, 1.0};
  CHECK(update(x, 0.5, std::vector<double>{2.0, -2.0}) == std::vector<double>{0.0, 2.0});
  CHECK(update(x, 0.0, std::vector<double>{2.0, -2.0}) == x);
  CHECK(update(x, 0.5, std::vector<double>{0.0, 0.0}) == x);
}

TEST_CASE("config validation") {
  const SpsaConfig ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = [](auto mutate, const std::string& field) {
    SpsaConfig c;
    mutate(c);
    try {
      c.validate();
      FAIL("expected a ValidationError for " << field);
    } catch (const ValidationError& e) {
      CHECK(e.field() == "spsa." + field);
    }
  };
  bad([](SpsaConfig& c) { c.a = 0.0; }, "a");
  bad([](SpsaConfig& c) { c.c = -1.0; }, "c");
  bad([](SpsaConfig& c) { c.alpha = 1.5; }, "alpha");
  bad([](SpsaConfig& c) { c.gamma = 1.0; }, "gamma");
  bad([](SpsaConfig& c) { c.j_max = 10; }, "j_max");
  bad([](SpsaConfig& c) { c.beta = 0.0; }, "beta");
  bad([](SpsaConfig& c) { c.max_retries = -1; }, "max_retries");
}

TEST_CASE("solver reaches the minimum of an 84-dim quadratic") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<double> target(84);
  for (auto& v : target) v = u(rng);
  SpsaProblem p;
  p.objective = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - target[k]) * (x[k] - target[k]);
    return s;
  };
  const std::vector<double> x0(84, 0.0);
  const auto r = spsa_solve(x0, SpsaConfig{}, p);
  REQUIRE(r.ok());
  CHECK(euclidean_distance(r.x, target) < 1e-2);
  CHECK(r.objective == doctest::Approx(p.objective(r.x)));
  CHECK(r.evaluations >= 2 * static_cast<long>(r.history.size()));
}

TEST_CASE("best objective in the history never increases") {
  SpsaProblem p;
  p.objective = [](std::span<const double> x) { return sum_sq(x) + std::sin(5.0 * x[0]); };
  const std::vector<double> x0(10, 1.0);
  SpsaConfig cfg;
  cfg.j_max = 300;
  const auto r = spsa_solve(x0, cfg, p);
  REQUIRE(!r.history.empty());
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    CHECK(r.history[k].best_objective <= r.history[k - 1].best_objective);
    CHECK(r.history[k].j == r.history[k - 1].j + 1);
  }
  CHECK(r.objective == r.history.back().best_objective);
}

TEST_CASE("identical seeds give identical runs") {
  SpsaProblem p;
  p.objective = [](std::span<const double> x) { return sum_sq(x); };
  const std::vector<double> x0(20, 0.7);
  SpsaConfig cfg;
  cfg.rng_seed = 123;
  const auto a = spsa_solve(x0, cfg, p);
  const auto b = spsa_solve(x0, cfg, p);
  CHECK(a.x == b.x);
  CHECK(a.history.size() == b.history.size());
  cfg.rng_seed = 124;
  CHECK(spsa_solve(x0, cfg, p).x != a.x);
}

TEST_CASE("single-iteration budget") {
  SpsaProblem p;
  p.objective = [](std::span<const double> x) { return sum_sq(x); };
  SpsaConfig cfg;
  cfg.j_min = 1;
  cfg.j_max = 1;
  const auto r = spsa_solve(std::vector<double>{1.0, 2.0}, cfg, p);
  CHECK(r.history.size() == 1);
  CHECK(r.reason != StopReason::NoFeasiblePoint);
}

TEST_CASE("iterates stay inside the feasible set once there") {
  // Feasible half-space x0 >= 0.5; minimum of the objective lies outside it.
  SpsaProblem p;
  p.objective = [](std::span<const double> x) { return sum_sq(x); };
  p.feasible = [](std::span<const double> x) { return x[0] >= 0.5; };
  SpsaConfig cfg;
  cfg.j_max = 400;
  const auto r = spsa_solve(std::vector<double>{2.0, 2.0, 2.0}, cfg, p);
  REQUIRE(r.ok());
  for (const auto& rec : r.history) CHECK(rec.feasible);
  CHECK(r.x[0] >= 0.5);
  CHECK(r.objective < sum_sq(std::vector<double>{2.0, 2.0, 2.0}));
}

TEST_CASE("no feasible point is reported, not thrown") {
  SpsaProblem p;
  p.objective = [](std::span<const double>) { return std::numeric_limits<double>::infinity(); };
  SpsaConfig cfg;
  cfg.j_max = 30;
  const auto r = spsa_solve(std::vector<double>{0.0, 0.0}, cfg, p);
  CHECK(r.reason == StopReason::NoFeasiblePoint);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("projection is applied to every accepted iterate") {
  SpsaProblem p;
  p.objective = [](std::span<const double> x) { return sum_sq(x); };
  p.project = [](std::span<double> x) {
    for (auto& v : x) v = std::max(v, 0.25);
  };
  SpsaConfig cfg;
  cfg.j_max = 200;
  const auto r = spsa_solve(std::vector<double>{1.0, 1.0}, cfg, p);
  for (double v : r.x) CHECK(v >= 0.25);
}
