#include "nct/common.hpp"

#include <algorithm>
#include <cmath>

namespace nct {

double plane_norm(PlaneNorm kind, double x, double y) {
  switch (kind) {
    case PlaneNorm::l1:
      return std::abs(x) + std::abs(y);
    case PlaneNorm::linf:
      return std::max(std::abs(x), std::abs(y));
    case PlaneNorm::euclidean:
    default:
      return std::hypot(x, y);
  }
}

double dual_plane_norm(PlaneNorm kind, double x, double y) {
  switch (kind) {
    case PlaneNorm::l1:
      return plane_norm(PlaneNorm::linf, x, y);
    case PlaneNorm::linf:
      return plane_norm(PlaneNorm::l1, x, y);
    case PlaneNorm::euclidean:
    default:
      return std::hypot(x, y);
  }
}

PlaneNorm parse_plane_norm(const std::string& name) {
  if (name == "euclidean" || name == "l2") return PlaneNorm::euclidean;
  if (name == "l1") return PlaneNorm::l1;
  if (name == "linf" || name == "max") return PlaneNorm::linf;
  throw ParameterError("unknown plane norm: " + name);
}

std::string to_string(PlaneNorm kind) {
  switch (kind) {
    case PlaneNorm::l1:
      return "l1";
    case PlaneNorm::linf:
      return "linf";
    default:
      return "euclidean";
  }
}

}  // namespace nct
