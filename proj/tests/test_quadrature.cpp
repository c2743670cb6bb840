#include <doctest.h>

#include <cmath>
#include <numbers>

#include "windband/error.hpp"
#include "windband/quadrature.hpp"

using namespace windband;

namespace {

double integrate(const GaussLegendreRule& r, double a, double b, auto f, std::size_t panels = 1) {
  std::vector<double> x, w;
  composite_gauss_legendre(r, {a, b}, panels, x, w);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("low-order rules match closed forms") {
  GaussLegendreRule one(1);
  CHECK(one.nodes[0] == doctest::Approx(0.0));
  CHECK(one.weights[0] == doctest::Approx(2.0));

  GaussLegendreRule two(2);
  const double r = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(std::abs(two.nodes[0]) - r) < 1e-15);
  CHECK(std::abs(two.nodes[0] + two.nodes[1]) < 1e-15);
  CHECK(std::abs(two.weights[0] - 1.0) < 1e-15);

  GaussLegendreRule three(3);
  std::vector<double> n = three.nodes;
  std::sort(n.begin(), n.end());
  CHECK(std::abs(n[0] + std::sqrt(0.6)) < 1e-15);
  CHECK(std::abs(n[1]) < 1e-15);
  CHECK(std::abs(n[2] - std::sqrt(0.6)) < 1e-15);

  CHECK_THROWS_AS(GaussLegendreRule(0), Error);
}

TEST_CASE("n-point rule integrates polynomials of degree 2n-1 exactly") {
  for (std::size_t n : {4u, 8u, 16u, 64u}) {
    GaussLegendreRule rule(n);
    double wsum = 0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 2.0) < 1e-13);
    for (std::size_t k = 0; k <= 2 * n - 1 && k <= 40; ++k) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], double(k));
      const double exact = k % 2 ? 0.0 : 2.0 / double(k + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("composite rule on smooth and piecewise integrands") {
  GaussLegendreRule rule(64);
  CHECK(std::abs(integrate(rule, 0, std::numbers::pi, [](double x) { return std::sin(x); }) - 2.0) <
        1e-14);
  CHECK(std::abs(integrate(rule, -3, 5, [](double x) { return std::exp(x); }, 4) -
                 (std::exp(5.0) - std::exp(-3.0))) < 1e-10);

  // a kink at a break is handled exactly when split there
  std::vector<double> x, w;
  composite_gauss_legendre(GaussLegendreRule(4), {-1.0, 0.0, 2.0}, 3, x, w);
  CHECK(x.size() == 4 * 2 * 3);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
  CHECK(std::abs(s - 2.5) < 1e-14);

  x.clear();
  w.clear();
  CHECK_THROWS_AS(composite_gauss_legendre(rule, {0.0, 1.0}, 0, x, w), Error);
}

}  // TEST_SUITE
