#include "windband/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "windband/error.hpp"

namespace windband {

GaussLegendreRule::GaussLegendreRule(std::size_t n) : nodes(n), weights(n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one node");
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void composite_gauss_legendre(const GaussLegendreRule& rule, const std::vector<double>& breaks,
                              std::size_t panels, std::vector<double>& x, std::vector<double>& w) {
  if (panels == 0) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one panel");
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = breaks[b];
    const double h = (breaks[b + 1] - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        x.push_back(mid + 0.5 * h * rule.nodes[i]);
        w.push_back(0.5 * h * rule.weights[i]);
      }
    }
  }
}

}  // namespace windband
