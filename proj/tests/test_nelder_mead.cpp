#include <doctest.h>

#include <cmath>
#include <random>

#include "windband/error.hpp"
#include "windband/nelder_mead.hpp"

using namespace windband;

TEST_SUITE("nelder_mead") {

TEST_CASE("quadratic bowl") {
  auto f = [](const std::vector<double>& x) {
    return (x[0] - 1.5) * (x[0] - 1.5) + 3 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  auto r = nelder_mead(f, {0.0, 0.0}, {1.0, 1.0});
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.5) < 1e-6);
  CHECK(std::abs(r.x[1] + 0.5) < 1e-6);
  CHECK(r.value < 1e-10);
}

TEST_CASE("Rosenbrock") {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_iterations = 5000;
  auto r = nelder_mead(f, {-1.2, 1.0}, {0.5, 0.5}, o);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
}

TEST_CASE("never worse than the start and deterministic") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    auto f = [&](const std::vector<double>& x) {
      return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.1 * (x[0] - a) * (x[0] - a) +
             0.1 * (x[1] - b) * (x[1] - b);
    };
    std::vector<double> x0{u(rng), u(rng)};
    NelderMeadOptions o;
    o.max_iterations = 60;
    auto r1 = nelder_mead(f, x0, {0.3, 0.3}, o);
    auto r2 = nelder_mead(f, x0, {0.3, 0.3}, o);
    CHECK(r1.value <= f(x0));
    CHECK(r1.value == f(r1.x));
    CHECK(r1.x == r2.x);
    CHECK(r1.value == r2.value);
    CHECK(r1.iterations <= 60);
  }
}

TEST_CASE("NaN regions are avoided") {
  auto f = [](const std::vector<double>& x) {
    return x[0] < 0 ? std::nan("") : (x[0] - 2) * (x[0] - 2);
  };
  auto r = nelder_mead(f, {0.5}, {1.0});
  CHECK(std::abs(r.x[0] - 2.0) < 1e-6);
  CHECK_FALSE(std::isnan(r.value));
}

TEST_CASE("dimension mismatch") {
  auto f = [](const std::vector<double>&) { return 0.0; };
  CHECK_THROWS_AS(nelder_mead(f, {0.0, 0.0}, {1.0}), Error);
}

}  // TEST_SUITE
