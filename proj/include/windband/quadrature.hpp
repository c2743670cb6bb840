#pragma once

#include <cstddef>
#include <vector>

namespace windband {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(std::size_t n);
  std::size_t size() const { return nodes.size(); }
};

/// Composite rule: each [breaks[i], breaks[i+1]] is cut into `panels` equal
/// pieces and each piece gets the base rule. Output nodes/weights are
/// appended to `x` and `w`.
void composite_gauss_legendre(const GaussLegendreRule& rule, const std::vector<double>& breaks,
                              std::size_t panels, std::vector<double>& x, std::vector<double>& w);

}  // namespace windband
