#include "nct/hmodule.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nct {
namespace {

/// Dense (2R+1) x (2R+1) table of inner-product entries, indexed [n + R][m + R].
Eigen::MatrixXcd inner_entries(const SchwartzVector& xi, const SchwartzVector& omega,
                               const ModuleParams& P, int R, const QuadratureSpec& quad) {
  const int side = 2 * R + 1, d = P.d;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(side, side);
  if (xi.is_zero() || omega.is_zero()) return out;

  // e^{-2 pi i s n} must stay resolved up to |n| = R
  QuadratureSpec qs = quad;
  qs.points_per_unit = std::max(qs.points_per_unit, 32 + 4 * R);
  QuadRule rule = quadrature_for(xi, qs);
  const std::size_t nq = rule.size();
  if (nq == 0) return out;
  const double e = P.eth();

  Jet X = xi.evaluate(rule.nodes, 0);
  std::vector<double> pts(side * nq);
  for (int mi = 0; mi < side; ++mi)
    for (std::size_t k = 0; k < nq; ++k) pts[mi * nq + k] = rule.nodes[k] + e * (mi - R);
  Jet W = omega.evaluate(pts, 0);

  // F(k, mi*d + c) = w_k xi_c(s_k) conj(omega_{c-m}(s_k + eth m))
  Eigen::MatrixXcd F(nq, side * d);
  for (int mi = 0; mi < side; ++mi) {
    const int m = mi - R;
    for (int c = 0; c < d; ++c) {
      const int cc = ((c - m) % d + d) % d;
      for (std::size_t k = 0; k < nq; ++k)
        F(k, mi * d + c) = rule.weights[k] * X(0, k, c) * std::conj(W(0, mi * nq + k, cc));
    }
  }
  // E(ni, k) = e^{-2 pi i s_k n}
  Eigen::MatrixXcd E(side, nq);
  for (std::size_t k = 0; k < nq; ++k) {
    const cplx z = std::polar(1.0, -kTwoPi * rule.nodes[k]);
    cplx zn = std::pow(z, -R);
    for (int ni = 0; ni < side; ++ni) {
      E(ni, k) = zn;
      zn *= z;
    }
  }
  Eigen::MatrixXcd G = E * F;

  for (int ni = 0; ni < side; ++ni) {
    const int n = ni - R;
    for (int mi = 0; mi < side; ++mi) {
      const int m = mi - R;
      cplx acc = 0.0;
      for (int c = 0; c < d; ++c)
        acc += std::polar(1.0, kTwoPi * P.p * double(n) * (c + 1) / P.q) * G(ni, mi * d + c);
      const double ph = -kPi * P.p * double(n) * m / P.q - kPi * e * double(n) * m;
      out(ni, mi) = std::polar(1.0, ph) * acc;
    }
  }
  return out;
}

TorusElement to_element(const Eigen::MatrixXcd& T, int R, double theta) {
  TorusElement::Map m;
  for (int ni = 0; ni <= 2 * R; ++ni)
    for (int mi = 0; mi <= 2 * R; ++mi)
      if (std::abs(T(ni, mi)) >= kDropThreshold) m[{ni - R, mi - R}] = T(ni, mi);
  return TorusElement(theta, std::move(m));
}

}  // namespace

InnerProductResult module_inner(const SchwartzVector& xi, const SchwartzVector& omega,
                                const ModuleParams& params, int box_radius,
                                const InnerOptions& opts) {
  if (xi.dim() != params.d || omega.dim() != params.d)
    throw DimensionError("module_inner: vector dimension must equal d");
  if (box_radius < 1) throw ParameterError("box radius must be >= 1");
  InnerProductResult res;
  res.box_radius = box_radius;
  const int R = box_radius;

  if (opts.tail == TailMode::doubling) {
    const int R2 = 2 * R;
    Eigen::MatrixXcd T = inner_entries(xi, omega, params, R2, opts.quad);
    double outside = 0.0;
    for (int ni = 0; ni <= 2 * R2; ++ni)
      for (int mi = 0; mi <= 2 * R2; ++mi)
        if (std::abs(ni - R2) > R || std::abs(mi - R2) > R) outside += std::abs(T(ni, mi));
    if (outside >= 1e-10)
      throw ParameterError("inner product tail mass " + std::to_string(outside) +
                           " exceeds 1e-10; increase the box radius");
    res.element = to_element(T.block(R2 - R, R2 - R, 2 * R + 1, 2 * R + 1), R, params.theta);
    res.tail_bound = 10.0 * outside;
    res.certified = true;
  } else {
    Eigen::MatrixXcd T = inner_entries(xi, omega, params, R, opts.quad);
    double ring = 0.0;
    for (int ni = 0; ni <= 2 * R; ++ni)
      for (int mi = 0; mi <= 2 * R; ++mi)
        if (ni == 0 || mi == 0 || ni == 2 * R || mi == 2 * R) ring += std::abs(T(ni, mi));
    res.element = to_element(T, R, params.theta);
    res.tail_bound = 10.0 * ring;
    res.certified = false;
  }
  return res;
}

TorusElement module_inner_direct(const SchwartzVector& xi, const SchwartzVector& omega,
                                 const ModuleParams& params, int box_radius,
                                 const QuadratureSpec& quad) {
  QuadratureSpec qs = quad;
  qs.points_per_unit = std::max(qs.points_per_unit, 32 + 4 * box_radius);
  TorusElement::Map m;
  for (int n = -box_radius; n <= box_radius; ++n)
    for (int mm = -box_radius; mm <= box_radius; ++mm)
      m[{n, mm}] = l2_inner(varpi_act(params, n, mm, omega), xi, qs);
  return TorusElement(params.theta, std::move(m));
}

NormInterval module_norm(const SchwartzVector& xi, const ModuleParams& params, int box_radius,
                         const ModuleNormOptions& opts) {
  NormInterval out;
  if (xi.is_zero()) {
    out.history.emplace_back(box_radius, 0.0);
    return out;
  }
  InnerProductResult ip = module_inner(xi, xi, params, box_radius, opts.inner);
  NormInterval tn = torus_norm(ip.element, box_radius, opts.torus);
  out.lower = std::sqrt(std::max(0.0, tn.lower - ip.tail_bound));
  out.upper = std::sqrt(tn.upper + ip.tail_bound);
  out.history.emplace_back(box_radius, out.lower);
  return out;
}

SchwartzVector omega_quotient(double x, double y, double t, const ModuleParams& params,
                              const SchwartzVector& xi, double r, PlaneNorm norm) {
  if (!(t >= 0.0)) throw ParameterError("omega_quotient: t must be >= 0");
  if (std::abs(plane_norm(norm, x, y) - 1.0) > 1e-9)
    throw ParameterError("omega_quotient: direction must have unit norm");
  const SchwartzVector xr = dilate(xi, r);
  if (xr.is_zero()) return SchwartzVector::zero(xi.dim());
  const double e = params.eth();
  if (t < kSmallT) {
    // d/dt at t = 0 of the difference quotient
    return linear_combine({cplx(0.0, x / e), cplx(y / kTwoPi, 0.0)}, {xr.times_s(), xr.derivative()});
  }
  const double c = 1.0 / (kTwoPi * e * t);
  return linear_combine({c, -c}, {weyl_act(params, t * x, t * y, xr), xr});
}

DNormEstimate dnorm(const SchwartzVector& xi, const ModuleParams& params, const GridSpec& grid,
                    int box_radius, const DNormOptions& opts, double r) {
  if (grid.directions < 1 || grid.t_samples < 2) throw ParameterError("dnorm: empty grid");
  DNormEstimate out;
  out.sphere_samples = grid.directions;
  out.t_samples = grid.t_samples;
  if (xi.is_zero()) return out;

  std::vector<cplx> warm;
  ModuleNormOptions mo;
  mo.inner = opts.inner;
  mo.torus.lanczos = opts.lanczos;
  auto measure = [&](const SchwartzVector& v) {
    mo.torus.warm_start = warm.empty() ? nullptr : &warm;
    std::vector<cplx> ritz;
    mo.torus.ritz_out = &ritz;
    NormInterval n = module_norm(v, params, box_radius, mo);
    if (!ritz.empty()) warm = std::move(ritz);
    return n;
  };

  NormInterval base = measure(dilate(xi, r));
  out.module_norm_lower = base.lower;
  double est = base.lower, est_half = base.lower, upper = base.upper;

  // The quotient for direction -u has the same module norm as for u, so
  // half of the sphere covers the full grid when the count is even.
  const int nd = grid.directions;
  const int nd_eval = (nd % 2 == 0) ? nd / 2 : nd;
  for (int i = 0; i < nd_eval; ++i) {
    const double phi = kTwoPi * i / nd;
    double ux = std::cos(phi), uy = std::sin(phi);
    const double s = plane_norm(grid.norm, ux, uy);
    ux /= s;
    uy /= s;
    for (int j = 0; j < grid.t_samples; ++j) {
      const double t = double(j) / (grid.t_samples - 1);
      NormInterval n = measure(omega_quotient(ux, uy, t, params, xi, r, grid.norm));
      if (n.lower > est) {
        est = n.lower;
        out.arg_x = ux;
        out.arg_y = uy;
        out.arg_t = t;
      }
      if (i % 2 == 0 && j % 2 == 0) est_half = std::max(est_half, n.lower);
      upper = std::max(upper, n.upper);
    }
  }
  out.refinement = {{0.5, est_half}, {1.0, est}};
  out.interval.lower = est;
  out.interval.upper = std::max(upper, est) + std::abs(est - est_half);
  out.interval.history = out.refinement;
  return out;
}

double mk_modular_metric_lower(const SchwartzVector& omega, const SchwartzVector& eta,
                               const std::vector<Tester>& testers, const ModuleParams& params,
                               int box_radius, const InnerOptions& opts) {
  for (const auto& t : testers)
    if (t.dnorm_upper > 1.0 + 1e-9) throw ParameterError("tester exceeds the D-norm unit ball");
  SchwartzVector diff = omega - eta;
  if (diff.is_zero()) return 0.0;
  double best = 0.0;
  for (const auto& t : testers) {
    InnerProductResult ip = module_inner(diff, t.v, params, box_radius, opts);
    if (ip.element.empty()) continue;
    double v = torus_norm(ip.element, box_radius).lower - ip.tail_bound;
    best = std::max(best, v);
  }
  return best;
}

double imprint_estimate(const std::vector<SchwartzVector>& anchors,
                        const std::vector<Tester>& samples, const std::vector<Tester>& testers,
                        const ModuleParams& params, int box_radius, const InnerOptions& opts) {
  if (anchors.empty() || samples.empty()) throw ParameterError("imprint_estimate: empty family");
  double worst = 0.0;
  for (const auto& s : samples) {
    if (s.dnorm_upper > 1.0 + 1e-9) throw ParameterError("sample exceeds the D-norm unit ball");
    double nearest = 1e300;
    for (const auto& a : anchors) {
      nearest = std::min(nearest, mk_modular_metric_lower(s.v, a, testers, params, box_radius, opts));
      if (nearest == 0.0) break;
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

void write_inner_product(std::ostream& os, const InnerProductResult& r) {
  os << "# box_radius " << r.box_radius << "\n# tail_bound " << r.tail_bound << "\n# certified "
     << (r.certified ? "yes" : "no") << '\n';
  write_torus_element(os, r.element);
}

}  // namespace nct
