#pragma once

#include <iosfwd>
#include <vector>

#include "nct/heisenberg.hpp"

namespace nct {

enum class TailMode {
  doubling,  // recompute on the doubled box; throws if the added mass is >= 1e-10
  ring,      // 10x the l1 mass on the outer ring of the box (no certificate)
};

struct InnerOptions {
  TailMode tail = TailMode::doubling;
  QuadratureSpec quad{};
};

struct InnerProductResult {
  TorusElement element;
  int box_radius = 0;
  double tail_bound = 0.0;
  bool certified = false;
};

/// (n,m) -> int <xi(s), (varpi^{n,m} omega)(s)> ds on |n|,|m| <= box_radius.
InnerProductResult module_inner(const SchwartzVector& xi, const SchwartzVector& omega,
                                const ModuleParams& params, int box_radius,
                                const InnerOptions& opts = {});

/// Slow reference path: one varpi_act + l2_inner per entry.
TorusElement module_inner_direct(const SchwartzVector& xi, const SchwartzVector& omega,
                                 const ModuleParams& params, int box_radius,
                                 const QuadratureSpec& quad = {});

struct ModuleNormOptions {
  InnerOptions inner{};
  TorusNormOptions torus{};
};

NormInterval module_norm(const SchwartzVector& xi, const ModuleParams& params, int box_radius,
                         const ModuleNormOptions& opts = {});

/// (weyl(tx,ty) xi_r - xi_r) / (2 pi eth t), closed-form limit for t < 1e-3.
SchwartzVector omega_quotient(double x, double y, double t, const ModuleParams& params,
                              const SchwartzVector& xi, double r = 1.0,
                              PlaneNorm norm = PlaneNorm::euclidean);

inline constexpr double kSmallT = 1e-3;

struct GridSpec {
  int directions = 64;  // on the full unit sphere of the plane norm
  int t_samples = 33;   // uniform on [0, 1], includes 0 and 1
  PlaneNorm norm = PlaneNorm::euclidean;
};

struct DNormOptions {
  InnerOptions inner{TailMode::ring, {}};
  LanczosOptions lanczos{60, 1e-8, 4};
};

struct DNormEstimate {
  NormInterval interval;
  int sphere_samples = 0;
  int t_samples = 0;
  std::vector<std::pair<double, double>> refinement;  // (resolution, estimate)
  double module_norm_lower = 0.0;
  double arg_x = 0.0, arg_y = 0.0, arg_t = 0.0;  // maximizing grid point
};

DNormEstimate dnorm(const SchwartzVector& xi, const ModuleParams& params, const GridSpec& grid,
                    int box_radius, const DNormOptions& opts = {}, double r = 1.0);

/// A vector with a known D-norm upper bound.
struct Tester {
  SchwartzVector v;
  double dnorm_upper = 0.0;
};

double mk_modular_metric_lower(const SchwartzVector& omega, const SchwartzVector& eta,
                               const std::vector<Tester>& testers, const ModuleParams& params,
                               int box_radius, const InnerOptions& opts = {TailMode::ring, {}});

/// max over samples of min over anchors of mk_modular_metric_lower.
double imprint_estimate(const std::vector<SchwartzVector>& anchors,
                        const std::vector<Tester>& samples, const std::vector<Tester>& testers,
                        const ModuleParams& params, int box_radius,
                        const InnerOptions& opts = {TailMode::ring, {}});

void write_inner_product(std::ostream& os, const InnerProductResult& r);

}  // namespace nct
