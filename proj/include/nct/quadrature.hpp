#pragma once

#include <vector>

namespace nct {

/// Composite Gauss-Legendre rule.  half_width <= 0 means "derive the
/// interval from the essential supports of the integrands".
struct QuadratureSpec {
  double half_width = 0.0;
  int points_per_unit = 32;
  int order = 16;
};

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
const QuadRule& gauss_legendre(int order);

QuadRule composite_rule(double a, double b, const QuadratureSpec& spec);

}  // namespace nct
