#include "nct/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "nct/common.hpp"

namespace nct {

const QuadRule& gauss_legendre(int order) {
  if (order < 1 || order > 128) throw ParameterError("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  QuadRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const unsigned n = static_cast<unsigned>(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p = std::legendre(n, x);
      double pm = order > 1 ? std::legendre(n - 1, x) : 1.0;
      dp = order * (x * p - pm) / (x * x - 1.0);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p = std::legendre(n, x), pm = order > 1 ? std::legendre(n - 1, x) : 1.0;
    dp = order * (x * p - pm) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = r.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(r)).first->second;
}

QuadRule composite_rule(double a, double b, const QuadratureSpec& spec) {
  QuadRule out;
  if (!(b > a)) return out;
  if (spec.points_per_unit < 1) throw ParameterError("points_per_unit must be >= 1");
  const QuadRule& gl = gauss_legendre(spec.order);
  const double panel = double(spec.order) / spec.points_per_unit;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel - 1e-12)));
  const double h = (b - a) / panels;
  out.nodes.reserve(panels * gl.size());
  out.weights.reserve(panels * gl.size());
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < gl.size(); ++k) {
      out.nodes.push_back(mid + 0.5 * h * gl.nodes[k]);
      out.weights.push_back(0.5 * h * gl.weights[k]);
    }
  }
  return out;
}

}  // namespace nct
