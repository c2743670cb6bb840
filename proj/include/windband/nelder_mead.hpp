#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace windband {

struct NelderMeadOptions {
  std::size_t max_iterations = 500;
  double f_tolerance = 1e-12;  // spread of simplex values
  double x_tolerance = 1e-9;   // max vertex distance from the best vertex (inf-norm)
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Derivative-free simplex descent. The initial simplex is `x0` plus one
/// vertex per coordinate offset by `steps[i]`. NaN values rank worst. The
/// returned value never exceeds f(x0).
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const std::vector<double>& steps, const NelderMeadOptions& opts = {});

}  // namespace windband
