#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nct/common.hpp"
#include "nct/quadrature.hpp"

namespace nct {

/// L_j(t), three-term recurrence.
double laguerre(int j, double t);

/// Orthonormal Hermite functions h_0..h_jmax at x (h_0 = pi^{-1/4} e^{-x^2/2}).
void hermite_functions(double x, int jmax, double* out);

/// H_eth^j(t) = eth^{1/4} H_1^j(sqrt(eth) t), with H_1^0(t) = 2^{1/4} e^{-pi t^2}.
double hermite_fn(double eth, int j, double t);

/// eth e^{-pi eth r^2 / 2} L_j(pi eth r^2)
double psi(double eth, int j, double r);

/// Function on [0, inf) vanishing beyond `support`.
struct RadialProfile {
  std::function<double(double)> f;
  double support = 0.0;
  bool nonnegative = false;

  double operator()(double r) const { return r > support ? 0.0 : f(r); }
  RadialProfile scaled(double c) const;
};

RadialProfile zero_profile();
/// e^{1 - 1/(1 - (r/R)^2)} on [0, R), peak value 1.
RadialProfile bump_profile(double radius);

/// int_0^inf |f| r dr by composite Gauss-Legendre on [0, support].
double l1_rdr(const RadialProfile& f, int points_per_unit = 64);
double l1_rdr_distance(const RadialProfile& f, const RadialProfile& g, double upto,
                       int points_per_unit = 64);

enum class CesaroNormalization {
  literal,      // coefficients <f psi^k, psi^k>, summed over j = 0..N
  orthonormal,  // Cesaro mean of order N of the orthonormal Laguerre expansion
};

std::string to_string(CesaroNormalization n);

struct CesaroResult {
  RadialProfile approx;
  CesaroNormalization normalization = CesaroNormalization::literal;
  std::vector<double> coefficients;  // weight on psi^k in the output
};

CesaroResult cesaro_sum(const RadialProfile& f, double eth, int N,
                        CesaroNormalization norm = CesaroNormalization::literal,
                        int points_per_unit = 64);

/// L1(r dr) error of cesaro_sum against f.
double cesaro_error(const RadialProfile& f, double eth, int N, CesaroNormalization norm);

/// Errors at each N under `literal`; if they fail to decrease strictly, repeats
/// under `orthonormal`.  Returns the normalization used.
CesaroNormalization select_cesaro_normalization(const RadialProfile& f, double eth,
                                                const std::vector<int>& Ns,
                                                std::vector<double>* errors = nullptr);

}  // namespace nct
