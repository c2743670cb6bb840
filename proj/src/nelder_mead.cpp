#include "windband/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "windband/error.hpp"

namespace windband {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

bool better(const Vertex& a, const Vertex& b) {
  if (std::isnan(a.f)) return false;
  if (std::isnan(b.f)) return true;
  return a.f < b.f;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const std::vector<double>& steps, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n)
    throw Error(ErrorKind::InvalidArgument, "nelder_mead: dimension mismatch");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return f(x);
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += steps[i];
    simplex.push_back({x, eval(x)});
  }

  auto affine = [n](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (w[i] - c[i]);
    return out;
  };

  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    std::stable_sort(simplex.begin(), simplex.end(), better);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double spread = std::abs(worst.f - best.f);
    double size = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        size = std::max(size, std::abs(simplex[v].x[i] - best.x[i]));
    if (spread <= opts.f_tolerance && size <= opts.x_tolerance) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);

    Vertex reflected{affine(centroid, worst.x, -opts.reflection), 0.0};
    reflected.f = eval(reflected.x);

    if (better(reflected, best)) {
      Vertex expanded{affine(centroid, worst.x, -opts.reflection * opts.expansion), 0.0};
      expanded.f = eval(expanded.x);
      simplex.back() = better(expanded, reflected) ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (better(reflected, simplex[n - 1])) {
      simplex.back() = std::move(reflected);
      continue;
    }
    // contraction: outside if the reflection beat the worst vertex, inside otherwise
    const bool outside = better(reflected, worst);
    Vertex contracted{affine(centroid, worst.x,
                             outside ? -opts.reflection * opts.contraction : opts.contraction),
                      0.0};
    contracted.f = eval(contracted.x);
    if (outside ? !better(reflected, contracted) : better(contracted, worst)) {
      simplex.back() = std::move(contracted);
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      simplex[v].x = affine(simplex[0].x, simplex[v].x, opts.shrink);
      simplex[v].f = eval(simplex[v].x);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(), better);
  res.x = simplex.front().x;
  res.value = simplex.front().f;
  return res;
}

}  // namespace windband
