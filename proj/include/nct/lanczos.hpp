#pragma once

#include <functional>
#include <vector>

#include "nct/common.hpp"

namespace nct {

/// y = A x for a square operator of fixed dimension.
using LinearMap = std::function<void(const cplx* x, cplx* y)>;

struct LanczosOptions {
  int max_steps = 80;
  double rel_tol = 1e-10;
  int check_every = 4;
};

struct RitzEstimate {
  double value = 0.0;             // largest |Ritz value|
  double min_value = 0.0;         // smallest Ritz value (signed)
  std::vector<cplx> vector;       // Ritz vector attached to `value`
  int steps = 0;
};

/// Extreme Ritz values of a Hermitian operator.  Every returned |value| is a
/// lower bound for the operator norm.
RitzEstimate lanczos_hermitian(const LinearMap& op, int dim,
                               const std::vector<cplx>* start = nullptr,
                               const LanczosOptions& opts = {});

/// Largest singular value estimate from Lanczos on A^* A.
RitzEstimate lanczos_top_singular(const LinearMap& op, const LinearMap& adjoint,
                                  int dim, const std::vector<cplx>* start = nullptr,
                                  const LanczosOptions& opts = {});

}  // namespace nct
