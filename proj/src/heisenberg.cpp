#include "nct/heisenberg.hpp"

#include <cmath>
#include <sstream>

namespace nct {

ModuleParams::ModuleParams(int p_, int q_, int d_, double theta_) : p(p_), q(q_), d(d_), theta(theta_) {
  validate();
}

void ModuleParams::validate() const {
  if (q < 1) throw ParameterError("q must be positive");
  if (d < 1) throw ParameterError("d must be positive");
  if (d % q != 0) throw ParameterError("d must be a multiple of q");
  if (!std::isfinite(theta)) throw ParameterError("theta must be finite");
  if (eth() == 0.0) throw ParameterError("theta - p/q must be nonzero");
}

std::string ModuleParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "p=" << p << " q=" << q << " d=" << d << " theta=" << theta;
  return os.str();
}

namespace {

/// Diagonal of u: e^{-2 pi i p (c+1) / q}, c = 0..d-1.
std::vector<cplx> clock_diagonal(const ModuleParams& P) {
  std::vector<cplx> lam(P.d);
  for (int c = 0; c < P.d; ++c) lam[c] = std::polar(1.0, -kTwoPi * P.p * double(c + 1) / P.q);
  return lam;
}

}  // namespace

ClockShift clock_shift(const ModuleParams& params) {
  params.validate();
  const int d = params.d;
  ClockShift cs{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d)};
  auto lam = clock_diagonal(params);
  for (int c = 0; c < d; ++c) {
    cs.u(c, c) = lam[c];
    cs.v((c + 1) % d, c) = 1.0;
  }
  return cs;
}

SchwartzVector alpha_act(const ModuleParams& params, double x, double y, double u,
                         const SchwartzVector& xi) {
  const double e = params.eth();
  return xi.modulate(x, e * y, e * u);
}

SchwartzVector weyl_act(const ModuleParams& params, double x, double y, const SchwartzVector& xi) {
  return alpha_act(params, x, y, 0.5 * x * y, xi);
}

SchwartzVector varpi_act(const ModuleParams& params, int n, int m, const SchwartzVector& xi) {
  if (xi.dim() != params.d) throw DimensionError("varpi_act: vector dimension must equal d");
  SchwartzVector s = weyl_act(params, n, m, xi);
  const cplx front = std::polar(1.0, kPi * params.p * double(n) * m / params.q);
  auto lam = clock_diagonal(params);
  std::vector<cplx> coef(params.d);
  for (int c = 0; c < params.d; ++c) coef[c] = front * std::pow(lam[c], n);
  return s.monomial_mix(coef, ((m % params.d) + params.d) % params.d);
}

SchwartzVector module_left_act(const TorusElement& a, const SchwartzVector& xi,
                               const ModuleParams& params) {
  if (a.theta() != params.theta) throw ParameterError("module_left_act: theta mismatch");
  if (a.size() > kMaxLeftActTerms) throw ParameterError("module_left_act: support too large");
  if (a.empty()) return SchwartzVector::zero(xi.dim());
  std::vector<cplx> cs;
  std::vector<SchwartzVector> vs;
  for (const auto& [g, c] : a.coeffs()) {
    cs.push_back(c);
    vs.push_back(varpi_act(params, g.n, g.m, xi));
  }
  return linear_combine(cs, vs);
}

namespace {

template <class F>
void for_each_disc_node(const RadialProfile& g, const Quad2D& quad, F&& fn) {
  if (quad.points_per_axis < 1) throw ParameterError("points_per_axis must be >= 1");
  const double R = g.support;
  const QuadRule& gl = gauss_legendre(quad.points_per_axis);
  for (std::size_t i = 0; i < gl.size(); ++i)
    for (std::size_t j = 0; j < gl.size(); ++j) {
      double z = R * gl.nodes[i], w = R * gl.nodes[j];
      double r = std::hypot(z, w);
      if (r > R) continue;
      double val = g(r);
      if (val < 0.0) throw ParameterError("smearing profile must be nonnegative");
      double wt = R * R * gl.weights[i] * gl.weights[j] * val;
      if (wt != 0.0) fn(z, w, wt);
    }
}

}  // namespace

double smearing_mass(const RadialProfile& g, const Quad2D& quad) {
  if (!std::isfinite(g.support) || g.support < 0.0)
    throw ParameterError("smearing profile needs a finite support");
  if (g.support == 0.0) return 0.0;
  double m = 0.0;
  for_each_disc_node(g, quad, [&](double, double, double wt) { m += wt; });
  return m;
}

SchwartzVector smeared_weyl(const ModuleParams& params, const RadialProfile& g,
                            const SchwartzVector& xi, const Quad2D& quad) {
  double mass = smearing_mass(g, quad);
  if (mass > 1.0 + 1e-12) throw ParameterError("smearing profile mass exceeds 1");
  if (mass == 0.0) return SchwartzVector::zero(xi.dim());
  std::vector<cplx> cs;
  std::vector<SchwartzVector> vs;
  for_each_disc_node(g, quad, [&](double z, double w, double wt) {
    cs.push_back(wt);
    vs.push_back(weyl_act(params, z, w, xi));
  });
  if (vs.empty()) return SchwartzVector::zero(xi.dim());
  return linear_combine(cs, vs);
}

}  // namespace nct
