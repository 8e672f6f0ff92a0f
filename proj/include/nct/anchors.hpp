#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nct/hmodule.hpp"

namespace nct {

/// Hermite coefficient block: coeffs[j][c] multiplies H_|eth|^j in component c.
using HermiteCoeffs = std::vector<std::vector<cplx>>;

struct AnchorOptions {
  GridSpec grid{16, 9, PlaneNorm::euclidean};
  int box_radius = 8;
  DNormOptions dnorm{};
  int random_extra = 8;       // random combinations on top of the basis vectors
  int density_samples = 200;  // rejection samples for the density self-check
  int max_anchors = 64;       // budget; exceeded -> error
  std::uint64_t seed = 1;
};

struct Anchor {
  HermiteCoeffs coeffs;  // already scaled into the unit ball
  Tester t;              // vector and its D-norm upper bound
  double dnorm_lower = 0.0;
};

struct AnchorFamily {
  ModuleParams params;
  int N = 0;
  double epsilon = 0.0;
  std::vector<Anchor> anchors;
  double density_max = 0.0;  // worst sampled module-norm distance to the family
  int density_checked = 0;
};

/// sum_j coeffs[j][c] H_|eth|^j e_c
SchwartzVector hermite_vector(const ModuleParams& params, const HermiteCoeffs& coeffs);

/// Scales coeffs so that the D-norm upper bound is 1.  Zero input is rejected.
Anchor unit_d_vector(const ModuleParams& params, HermiteCoeffs coeffs, const AnchorOptions& opts);

/// Hermite basis j <= N plus random combinations, each in the D-norm unit ball,
/// grown greedily until every density sample lies within epsilon.
AnchorFamily anchor_family(const ModuleParams& params, double epsilon, int N,
                           const AnchorOptions& opts = {});

/// Same coefficients in the target module's Hermite basis, scaled so that
/// D_target(eta_j) matches D(omega_j).
std::vector<Tester> rescaled_co_anchors(const AnchorFamily& fam, const ModuleParams& target,
                                        const AnchorOptions& opts = {});

/// Random unit-D Hermite combinations of degree <= N.
std::vector<Tester> random_unit_ball(const ModuleParams& params, int N, int count,
                                     std::uint64_t seed, const AnchorOptions& opts = {});

void write_anchor_family(std::ostream& os, const AnchorFamily& fam);

}  // namespace nct
