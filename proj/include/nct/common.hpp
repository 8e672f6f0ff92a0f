#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nct {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a numeric parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when vector dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Certified enclosure [lower, upper] with a refinement trail.
struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::pair<double, double>> history;  // (resolution, lower)

  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double v, double tol = 0.0) const {
    return v >= lower - tol && v <= upper + tol;
  }
};

/// Norm placed on R^2 for the L-seminorm and D-norm.
enum class PlaneNorm { euclidean, l1, linf };

double plane_norm(PlaneNorm kind, double x, double y);
double dual_plane_norm(PlaneNorm kind, double x, double y);
PlaneNorm parse_plane_norm(const std::string& name);
std::string to_string(PlaneNorm kind);

}  // namespace nct
