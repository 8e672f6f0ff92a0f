#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nct/hmodule.hpp"

namespace nct {

/// Diagonal pivot on the sequence space of Z^2.
struct PivotSpec {
  enum class Kind { fejer, identity };
  Kind kind = Kind::fejer;
  int order = 16;      // Fejer order N; weights vanish once |n| or |m| reaches N
  int box_radius = 0;  // 0 picks the smallest exact box

  static PivotSpec fejer(int N) { return {Kind::fejer, N, 0}; }
  static PivotSpec identity(int R) { return {Kind::identity, 0, R}; }

  double weight(int n, int m) const;
  /// Radius outside of which every weight is zero (identity: the box itself).
  int support_radius() const;
  std::string describe() const;
};

struct BridgeNormOptions {
  LanczosOptions lanczos{120, 1e-9, 4};
  double drop = 0.0;  // coefficients below this are discarded; their l1 mass joins the upper bound
};

/// || pi_theta(a) X - X pi_vartheta(b) || with X the pivot; a and b carry their own theta.
/// lower: Lanczos on the truncated operator.  upper: lower + truncation margin + dropped
/// l1 mass.  A Fejer pivot in an auto-sized box sees the whole (finite-rank) operator, so
/// its margin is zero; an identity pivot takes the change under one box doubling.
NormInterval bridge_norm(const TorusElement& a, const TorusElement& b, const PivotSpec& pivot,
                         const BridgeNormOptions& opts = {});

/// Certified but loose: Schur test sqrt(max row sum * max column sum) of the entry moduli.
double bridge_norm_schur_bound(const TorusElement& a, const TorusElement& b, const PivotSpec& pivot,
                               double drop = 0.0);

struct ModularBridge {
  PivotSpec pivot;
  ModuleParams params_a;  // module over theta
  ModuleParams params_b;  // module over vartheta
  std::vector<Tester> anchors;
  std::vector<Tester> co_anchors;

  void validate() const;
};

struct ReachResult {
  std::vector<std::vector<NormInterval>> matrix;  // [j][k]
  double value = 0.0;                             // max of the upper ends
};

ReachResult modular_reach(const ModularBridge& bridge, int box_radius,
                          const InnerOptions& inner = {TailMode::ring, {}},
                          const BridgeNormOptions& opts = {});

/// Fejer order from `candidates` with the smallest modular reach; any pivot gives an
/// upper bound, so the best of several is still one.
PivotSpec select_fejer_pivot(const ModularBridge& bridge, const std::vector<int>& candidates,
                             int box_radius, const InnerOptions& inner = {TailMode::ring, {}},
                             const BridgeNormOptions& opts = {});

struct BasicLengthEstimate {
  double reach_proxy = 0.0;
  double height_proxy = 0.0;
  double value = 0.0;  // max of the two; an ESTIMATE, not a certified bound
};

/// Sampled L-unit-ball elements (Fejer-truncated monomial combinations) at both
/// parameters; each sample is compared with its mirror on the other side.
BasicLengthEstimate basic_length_estimate(double theta, double vartheta, const PivotSpec& pivot,
                                          int sample_budget, std::uint64_t seed,
                                          const BridgeNormOptions& opts = {});

/// D-bounded families used for the imprint estimates of each side.
struct ImprintInputs {
  std::vector<Tester> samples_a, testers_a;
  std::vector<Tester> samples_b, testers_b;
};

struct BridgeLengthReport {
  double theta = 0.0, vartheta = 0.0;
  std::vector<std::vector<NormInterval>> bridge_norms;
  double modular_reach = 0.0;
  double imprint_a = 0.0, imprint_b = 0.0;
  BasicLengthEstimate basic;
  double total_length = 0.0;
  double propinquity_upper = 0.0;

  /// total_length = max(basic, max(imprint_a, imprint_b) + reach)
  static double assemble(double basic, double imprint_a, double imprint_b, double reach);
};

struct BridgeLengthOptions {
  int box_radius = 10;  // inner-product box
  InnerOptions inner{TailMode::ring, {}};
  BridgeNormOptions norm{};
  int sample_budget = 128;
  std::uint64_t seed = 1;
};

BridgeLengthReport bridge_length(const ModularBridge& bridge, const ImprintInputs& imprint,
                                 const BridgeLengthOptions& opts = {});

}  // namespace nct
