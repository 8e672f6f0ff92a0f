#include "nct/anchors.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace nct {
namespace {

HermiteCoeffs random_coeffs(int N, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  HermiteCoeffs c(N + 1, std::vector<cplx>(d));
  for (auto& row : c)
    for (auto& z : row) z = cplx(g(rng), g(rng));
  return c;
}

HermiteCoeffs scale(HermiteCoeffs c, double s) {
  for (auto& row : c)
    for (auto& z : row) z *= s;
  return c;
}

}  // namespace

SchwartzVector hermite_vector(const ModuleParams& params, const HermiteCoeffs& coeffs) {
  for (const auto& row : coeffs)
    if (static_cast<int>(row.size()) != params.d) throw DimensionError("hermite_vector: component count");
  return SchwartzVector::hermite_series(std::abs(params.eth()), coeffs);
}

Anchor unit_d_vector(const ModuleParams& params, HermiteCoeffs coeffs, const AnchorOptions& opts) {
  SchwartzVector v = hermite_vector(params, coeffs);
  if (v.is_zero()) throw ParameterError("unit_d_vector: zero vector");
  DNormEstimate e = dnorm(v, params, opts.grid, opts.box_radius, opts.dnorm);
  if (!(e.interval.upper > 0.0)) throw ParameterError("unit_d_vector: vanishing D-norm");
  const double s = 1.0 / e.interval.upper;
  Anchor a;
  a.coeffs = scale(std::move(coeffs), s);
  a.t.v = v.scaled(s);
  a.t.dnorm_upper = 1.0;  // homogeneity of the estimator
  a.dnorm_lower = e.interval.lower * s;
  return a;
}

AnchorFamily anchor_family(const ModuleParams& params, double epsilon, int N, const AnchorOptions& opts) {
  params.validate();
  if (N < 0) throw ParameterError("anchor_family: N must be >= 0");
  if (!(epsilon > 0.0)) throw ParameterError("anchor_family: epsilon must be positive");
  AnchorFamily fam;
  fam.params = params;
  fam.N = N;
  fam.epsilon = epsilon;
  std::mt19937_64 rng(opts.seed);

  for (int j = 0; j <= N; ++j)
    for (int c = 0; c < params.d; ++c) {
      HermiteCoeffs co(N + 1, std::vector<cplx>(params.d));
      co[j][c] = 1.0;
      fam.anchors.push_back(unit_d_vector(params, co, opts));
    }
  for (int i = 0; i < opts.random_extra; ++i)
    fam.anchors.push_back(unit_d_vector(params, random_coeffs(N, params.d, rng), opts));
  if (static_cast<int>(fam.anchors.size()) > opts.max_anchors)
    throw ParameterError("anchor_family: dnorm budget exhausted by the basis");

  ModuleNormOptions mo;
  mo.inner.tail = TailMode::ring;
  for (int i = 0; i < opts.density_samples; ++i) {
    Anchor s = unit_d_vector(params, random_coeffs(N, params.d, rng), opts);
    double best = 1e300;
    for (const auto& a : fam.anchors) {
      best = std::min(best, module_norm(s.t.v - a.t.v, params, opts.box_radius, mo).upper);
      if (best <= epsilon) break;
    }
    if (best > epsilon) {
      if (static_cast<int>(fam.anchors.size()) >= opts.max_anchors)
        throw ParameterError("anchor_family: dnorm budget exhausted before the density check passed");
      fam.anchors.push_back(std::move(s));
      best = 0.0;
    }
    fam.density_max = std::max(fam.density_max, best);
    ++fam.density_checked;
  }
  return fam;
}

std::vector<Tester> rescaled_co_anchors(const AnchorFamily& fam, const ModuleParams& target,
                                        const AnchorOptions& opts) {
  target.validate();
  if (target.d != fam.params.d) throw DimensionError("rescaled_co_anchors: d differs");
  std::vector<Tester> out;
  for (const auto& a : fam.anchors) {
    SchwartzVector w = hermite_vector(target, a.coeffs);
    DNormEstimate e = dnorm(w, target, opts.grid, opts.box_radius, opts.dnorm);
    const double s = a.t.dnorm_upper / e.interval.upper;
    out.push_back({w.scaled(s), a.t.dnorm_upper});
  }
  return out;
}

std::vector<Tester> random_unit_ball(const ModuleParams& params, int N, int count, std::uint64_t seed,
                                     const AnchorOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<Tester> out;
  for (int i = 0; i < count; ++i) out.push_back(unit_d_vector(params, random_coeffs(N, params.d, rng), opts).t);
  return out;
}

void write_anchor_family(std::ostream& os, const AnchorFamily& fam) {
  os.precision(17);
  os << "# " << fam.params.describe() << " N=" << fam.N << " epsilon=" << fam.epsilon
     << " density_max=" << fam.density_max << '\n';
  for (std::size_t i = 0; i < fam.anchors.size(); ++i) {
    const auto& a = fam.anchors[i];
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
      for (std::size_t c = 0; c < a.coeffs[j].size(); ++c)
        if (a.coeffs[j][c] != cplx(0.0))
          os << i << ' ' << j << ' ' << c << ' ' << a.coeffs[j][c].real() << ' ' << a.coeffs[j][c].imag()
             << '\n';
  }
}

}  // namespace nct
