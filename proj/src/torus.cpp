#include "nct/torus.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace nct {

TorusElement::TorusElement(double theta, Map coeffs) : theta_(theta), coeffs_(std::move(coeffs)) {
  prune();
}

TorusElement TorusElement::monomial(double theta, int n, int m, cplx c) {
  TorusElement a(theta);
  a.add(n, m, c);
  return a;
}

cplx TorusElement::at(int n, int m) const {
  auto it = coeffs_.find({n, m});
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

void TorusElement::add(int n, int m, cplx c) {
  auto [it, inserted] = coeffs_.try_emplace(Site{n, m}, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kDropThreshold) coeffs_.erase(it);
}

void TorusElement::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return std::abs(kv.second) < kDropThreshold; });
}

double TorusElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [g, c] : coeffs_) s += std::abs(c);
  return s;
}

int TorusElement::support_radius() const {
  int r = 0;
  for (const auto& [g, c] : coeffs_) r = std::max({r, std::abs(g.n), std::abs(g.m)});
  return r;
}

TorusElement TorusElement::operator+(const TorusElement& o) const {
  TorusElement r = *this;
  for (const auto& [g, c] : o.coeffs_) r.add(g.n, g.m, c);
  return r;
}

TorusElement TorusElement::operator-(const TorusElement& o) const {
  TorusElement r = *this;
  for (const auto& [g, c] : o.coeffs_) r.add(g.n, g.m, -c);
  return r;
}

TorusElement TorusElement::operator*(cplx s) const {
  Map m;
  for (const auto& [g, c] : coeffs_) m[g] = c * s;
  return TorusElement(theta_, std::move(m));
}

TorusElement TorusElement::real_part() const { return (*this + involution(*this)) * 0.5; }

TorusElement TorusElement::imag_part() const {
  return (*this - involution(*this)) * cplx(0.0, -0.5);
}

cplx cocycle(double theta, double x1, double y1, double x2, double y2) {
  return std::polar(1.0, kPi * theta * (x2 * y1 - x1 * y2));
}

TorusElement twisted_product(const TorusElement& a, const TorusElement& b) {
  if (a.theta() != b.theta()) throw ParameterError("twisted_product: theta mismatch");
  const double th = a.theta();
  TorusElement::Map acc;
  for (const auto& [h, ca] : a.coeffs()) {
    for (const auto& [k, cb] : b.coeffs()) {
      acc[h + k] += ca * cb * cocycle(th, h, k);
    }
  }
  return TorusElement(th, std::move(acc));
}

TorusElement involution(const TorusElement& a) {
  TorusElement::Map m;
  for (const auto& [g, c] : a.coeffs()) m[-g] = std::conj(c);
  return TorusElement(a.theta(), std::move(m));
}

double max_coeff_distance(const TorusElement& a, const TorusElement& b) {
  double d = 0.0;
  for (const auto& [g, c] : a.coeffs()) d = std::max(d, std::abs(c - b.at(g.n, g.m)));
  for (const auto& [g, c] : b.coeffs()) d = std::max(d, std::abs(c - a.at(g.n, g.m)));
  return d;
}

bool is_self_adjoint(const TorusElement& a, double tol) {
  TorusElement s = involution(a);
  return max_coeff_distance(a, s) <= tol * std::max(1.0, a.l1_norm());
}

GnsOperator::GnsOperator(const TorusElement& a, int box_radius) : box_{box_radius} {
  if (box_radius < 1) throw ParameterError("box radius must be >= 1");
  const int R = box_radius;
  const double th = a.theta();
  for (const auto& [h, c] : a.coeffs()) {
    if (std::abs(h.n) > 2 * R || std::abs(h.m) > 2 * R) continue;
    Term t{h, c, std::vector<cplx>(box_.side()), std::vector<cplx>(box_.side())};
    for (int k = -R; k <= R; ++k) {
      t.px[k + R] = std::polar(1.0, kPi * th * double(k) * h.m);
      t.py[k + R] = std::polar(1.0, -kPi * th * double(h.n) * k);
    }
    terms_.push_back(std::move(t));
  }
}

void GnsOperator::apply(const cplx* x, cplx* y) const {
  const int R = box_.radius, S = box_.side();
  std::fill(y, y + box_.dim(), cplx(0.0));
  for (const auto& t : terms_) {
    const int n0 = std::max(-R, -R - t.h.n), n1 = std::min(R, R - t.h.n);
    const int m0 = std::max(-R, -R - t.h.m), m1 = std::min(R, R - t.h.m);
    for (int kn = n0; kn <= n1; ++kn) {
      const cplx cx = t.c * t.px[kn + R];
      const cplx* xr = x + (kn + R) * S + R;
      cplx* yr = y + (kn + t.h.n + R) * S + R + t.h.m;
      for (int km = m0; km <= m1; ++km) yr[km] += cx * t.py[km + R] * xr[km];
    }
  }
}

void GnsOperator::apply_adjoint(const cplx* x, cplx* y) const {
  const int R = box_.radius, S = box_.side();
  std::fill(y, y + box_.dim(), cplx(0.0));
  for (const auto& t : terms_) {
    const int n0 = std::max(-R, -R - t.h.n), n1 = std::min(R, R - t.h.n);
    const int m0 = std::max(-R, -R - t.h.m), m1 = std::min(R, R - t.h.m);
    for (int kn = n0; kn <= n1; ++kn) {
      const cplx cx = std::conj(t.c * t.px[kn + R]);
      cplx* yr = y + (kn + R) * S + R;
      const cplx* xr = x + (kn + t.h.n + R) * S + R + t.h.m;
      for (int km = m0; km <= m1; ++km) yr[km] += cx * std::conj(t.py[km + R]) * xr[km];
    }
  }
}

Eigen::MatrixXcd gns_matrix(const TorusElement& a, int box_radius) {
  if (box_radius < 1) throw ParameterError("box radius must be >= 1");
  Box box{box_radius};
  const int R = box_radius;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(box.dim(), box.dim());
  for (int gn = -R; gn <= R; ++gn)
    for (int gm = -R; gm <= R; ++gm)
      for (int kn = -R; kn <= R; ++kn)
        for (int km = -R; km <= R; ++km) {
          cplx c = a.at(gn - kn, gm - km);
          if (c == cplx(0.0)) continue;
          M(box.index(gn, gm), box.index(kn, km)) =
              c * cocycle(a.theta(), gn - kn, gm - km, kn, km);
        }
  return M;
}

NormInterval torus_norm(const TorusElement& a, int box_radius, const TorusNormOptions& opts) {
  NormInterval out;
  out.upper = a.l1_norm();
  if (a.empty()) {
    out.history.emplace_back(box_radius, 0.0);
    return out;
  }
  GnsOperator op(a, box_radius);
  RitzEstimate r;
  if (is_self_adjoint(a)) {
    r = lanczos_hermitian([&](const cplx* x, cplx* y) { op.apply(x, y); }, op.dim(),
                          opts.warm_start, opts.lanczos);
  } else {
    r = lanczos_top_singular([&](const cplx* x, cplx* y) { op.apply(x, y); },
                             [&](const cplx* x, cplx* y) { op.apply_adjoint(x, y); },
                             op.dim(), opts.warm_start, opts.lanczos);
  }
  out.lower = std::min(r.value, out.upper);
  out.history.emplace_back(box_radius, out.lower);
  if (opts.ritz_out) *opts.ritz_out = std::move(r.vector);
  return out;
}

NormInterval torus_norm_refined(const TorusElement& a, int box_radius, int max_radius,
                                double rel_tol) {
  NormInterval out = torus_norm(a, box_radius);
  for (int R = 2 * box_radius; R <= max_radius; R *= 2) {
    NormInterval next = torus_norm(a, R);
    double prev = out.lower;
    out.lower = std::max(out.lower, next.lower);
    out.history.emplace_back(R, out.lower);
    if (std::abs(out.lower - prev) <= rel_tol * std::max(out.lower, 1e-300)) break;
  }
  return out;
}

TorusElement beta_act(const TorusElement& a, double x, double y) {
  TorusElement::Map m;
  for (const auto& [g, c] : a.coeffs()) m[g] = c * std::polar(1.0, g.n * x + g.m * y);
  return TorusElement(a.theta(), std::move(m));
}

double fejer_weight(int n, int m, int N) {
  if (N < 1) throw ParameterError("Fejer order must be >= 1");
  double wn = std::max(0.0, 1.0 - std::abs(n) / double(N));
  double wm = std::max(0.0, 1.0 - std::abs(m) / double(N));
  return wn * wm;
}

TorusElement fejer_truncate(const TorusElement& a, int N) {
  TorusElement::Map m;
  for (const auto& [g, c] : a.coeffs()) {
    double w = fejer_weight(g.n, g.m, N);
    if (w > 0.0) m[g] = c * w;
  }
  return TorusElement(a.theta(), std::move(m));
}

double fejer_constant(int N, PlaneNorm norm, int support_radius) {
  double best = 0.0;
  for (int n = -support_radius; n <= support_radius; ++n)
    for (int m = -support_radius; m <= support_radius; ++m) {
      if (n == 0 && m == 0) continue;
      best = std::max(best, (1.0 - fejer_weight(n, m, N)) / dual_plane_norm(norm, n, m));
    }
  return best;
}

NormInterval l_seminorm(const TorusElement& a, int box_radius, int direction_samples,
                        PlaneNorm norm) {
  if (direction_samples < 1) throw ParameterError("direction_samples must be >= 1");
  NormInterval out;
  for (const auto& [g, c] : a.coeffs()) out.upper += std::abs(c) * dual_plane_norm(norm, g.n, g.m);
  if (out.upper == 0.0) {
    out.history.emplace_back(direction_samples, 0.0);
    return out;
  }
  // beta is 2*pi periodic, so displacements beyond pi only lengthen the denominator.
  static constexpr double kMagnitudes[] = {1e-3, 0.25, 1.0, kPi};
  for (int i = 0; i < direction_samples; ++i) {
    double phi = kPi * i / direction_samples;
    double ux = std::cos(phi), uy = std::sin(phi);
    double s = plane_norm(norm, ux, uy);
    ux /= s;
    uy /= s;
    for (double r : kMagnitudes) {
      TorusElement diff = beta_act(a, r * ux, r * uy) - a;
      double v = torus_norm(diff, box_radius).lower / r;
      out.lower = std::max(out.lower, v);
    }
  }
  out.lower = std::min(out.lower, out.upper);
  out.history.emplace_back(direction_samples, out.lower);
  return out;
}

void write_torus_element(std::ostream& os, const TorusElement& a) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "theta " << a.theta() << '\n';
  for (const auto& [g, c] : a.coeffs())
    buf << g.n << ' ' << g.m << ' ' << c.real() << ' ' << c.imag() << '\n';
  os << buf.str();
}

TorusElement read_torus_element(std::istream& is) {
  std::string line, key;
  int lineno = 0;
  double theta = 0.0;
  bool have_theta = false;
  TorusElement::Map m;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_theta) {
      if (!(ls >> key >> theta) || key != "theta")
        throw ParameterError("line " + std::to_string(lineno) + ": expected 'theta <value>'");
      have_theta = true;
      continue;
    }
    int n, mm;
    double re, im;
    if (!(ls >> n >> mm >> re >> im))
      throw ParameterError("line " + std::to_string(lineno) + ": expected 'n m re im'");
    m[{n, mm}] += cplx(re, im);
  }
  if (!have_theta) throw ParameterError("missing theta header");
  return TorusElement(theta, std::move(m));
}

}  // namespace nct
