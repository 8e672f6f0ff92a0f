#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nct/schwartz.hpp"
#include "nct/special.hpp"
#include "nct/torus.hpp"

namespace nct {

/// Fixes one Heisenberg module: eth = theta - p/q must be nonzero, q | d.
struct ModuleParams {
  int p = 0;
  int q = 1;
  int d = 1;
  double theta = 0.0;

  ModuleParams() = default;
  ModuleParams(int p_, int q_, int d_, double theta_);

  double eth() const { return theta - double(p) / q; }
  void validate() const;
  ModuleParams with_theta(double th) const { return ModuleParams(p, q, d, th); }
  std::string describe() const;
};

struct ClockShift {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;
};

ClockShift clock_shift(const ModuleParams& params);

/// s -> e^{2 pi i (eth u + s x)} xi(s + eth y)
SchwartzVector alpha_act(const ModuleParams& params, double x, double y, double u,
                         const SchwartzVector& xi);
SchwartzVector weyl_act(const ModuleParams& params, double x, double y, const SchwartzVector& xi);
SchwartzVector varpi_act(const ModuleParams& params, int n, int m, const SchwartzVector& xi);

inline constexpr std::size_t kMaxLeftActTerms = 100000;

SchwartzVector module_left_act(const TorusElement& a, const SchwartzVector& xi,
                               const ModuleParams& params);

/// Tensor Gauss-Legendre grid over the support square, masked to the disc.
struct Quad2D {
  int points_per_axis = 16;
};

/// int int g(|(z,w)|) weyl_act(z, w, xi) dz dw
SchwartzVector smeared_weyl(const ModuleParams& params, const RadialProfile& g,
                            const SchwartzVector& xi, const Quad2D& quad = {});

/// Total mass of g(|.|) under the same 2-D rule.
double smearing_mass(const RadialProfile& g, const Quad2D& quad = {});

}  // namespace nct
