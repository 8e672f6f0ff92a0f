#include "nct/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nct {

double PivotSpec::weight(int n, int m) const {
  if (kind == Kind::identity) return (std::abs(n) <= box_radius && std::abs(m) <= box_radius) ? 1.0 : 0.0;
  return fejer_weight(n, m, order);
}

int PivotSpec::support_radius() const {
  return kind == Kind::identity ? box_radius : order - 1;
}

std::string PivotSpec::describe() const {
  std::ostringstream os;
  if (kind == Kind::identity)
    os << "identity:" << box_radius;
  else
    os << "fejer:" << order;
  return os.str();
}

namespace {

TorusElement prune(const TorusElement& x, double drop, double& dropped) {
  if (drop <= 0.0) return x;
  TorusElement::Map m;
  for (const auto& [g, c] : x.coeffs()) {
    if (std::abs(c) >= drop)
      m[g] = c;
    else
      dropped += std::abs(c);
  }
  return TorusElement(x.theta(), std::move(m));
}

struct BridgeSetup {
  TorusElement a, b;
  double dropped = 0.0;
  int R = 0;
  bool exact = false;  // every nonzero entry of the operator lies inside the box
};

BridgeSetup setup(const TorusElement& a_in, const TorusElement& b_in, const PivotSpec& pivot, double drop) {
  if (pivot.kind == PivotSpec::Kind::fejer && pivot.order < 1)
    throw ParameterError("bridge_norm: Fejer order must be >= 1");
  BridgeSetup s;
  s.a = prune(a_in, drop, s.dropped);
  s.b = prune(b_in, drop, s.dropped);
  const int sa = s.a.empty() ? 0 : s.a.support_radius(), sb = s.b.empty() ? 0 : s.b.support_radius();
  s.R = pivot.box_radius;
  if (pivot.kind == PivotSpec::Kind::fejer) {
    // the operator is finite rank and the box sees all of it
    const int need = pivot.support_radius() + std::max(sa, sb);
    if (s.R == 0) s.R = std::max(need, 1);
    if (s.R < need)
      throw ParameterError("bridge_norm: pivot box radius " + std::to_string(s.R) + " below " +
                           std::to_string(need));
    s.exact = true;
  } else if (s.R < 1) {
    throw ParameterError("bridge_norm: identity pivot needs a box radius");
  }
  return s;
}

std::vector<double> weights(const PivotSpec& pivot, const Box& box) {
  const int R = box.radius;
  std::vector<double> w(box.dim());
  for (int n = -R; n <= R; ++n)
    for (int m = -R; m <= R; ++m) w[box.index(n, m)] = pivot.weight(n, m);
  return w;
}

double lanczos_value(const TorusElement& a, const TorusElement& b, const PivotSpec& pivot, int R,
                     const LanczosOptions& lo) {
  const Box box{R};
  const int dim = box.dim();
  const std::vector<double> w = weights(pivot, box);
  GnsOperator A(a, R), B(b, R);
  std::vector<cplx> t1(dim), t2(dim);
  LinearMap T = [&](const cplx* x, cplx* y) {
    for (int i = 0; i < dim; ++i) t1[i] = w[i] * x[i];
    A.apply(t1.data(), y);
    B.apply(x, t2.data());
    for (int i = 0; i < dim; ++i) y[i] -= w[i] * t2[i];
  };
  LinearMap Tadj = [&](const cplx* x, cplx* y) {
    A.apply_adjoint(x, y);
    for (int i = 0; i < dim; ++i) {
      y[i] *= w[i];
      t1[i] = w[i] * x[i];
    }
    B.apply_adjoint(t1.data(), t2.data());
    for (int i = 0; i < dim; ++i) y[i] -= t2[i];
  };
  return lanczos_top_singular(T, Tadj, dim, nullptr, lo).value;
}

}  // namespace

NormInterval bridge_norm(const TorusElement& a_in, const TorusElement& b_in, const PivotSpec& pivot,
                         const BridgeNormOptions& opts) {
  BridgeSetup s = setup(a_in, b_in, pivot, opts.drop);
  NormInterval out;
  if (s.a.empty() && s.b.empty()) {
    out.upper = s.dropped;
    return out;
  }
  out.lower = lanczos_value(s.a, s.b, pivot, s.R, opts.lanczos);
  out.history.emplace_back(s.R, out.lower);
  double margin = 0.0;
  if (!s.exact) {
    // identity pivot: the compression grows with the box, use one doubling as the margin
    const double big = lanczos_value(s.a, s.b, PivotSpec::identity(2 * s.R), 2 * s.R, opts.lanczos);
    out.history.emplace_back(2 * s.R, big);
    margin = std::abs(big - out.lower);
    out.lower = std::max(out.lower, big);
  }
  out.upper = out.lower + margin + s.dropped;
  return out;
}

double bridge_norm_schur_bound(const TorusElement& a_in, const TorusElement& b_in, const PivotSpec& pivot,
                               double drop) {
  BridgeSetup s = setup(a_in, b_in, pivot, drop);
  const TorusElement& a = s.a;
  const TorusElement& b = s.b;
  const int R = s.R;
  const Box box{R};
  const std::vector<double> w = weights(pivot, box);
  std::vector<Site> shifts;
  for (const auto& [g, c] : a.coeffs()) shifts.push_back(g);
  for (const auto& [g, c] : b.coeffs())
    if (a.at(g.n, g.m) == cplx(0.0)) shifts.push_back(g);
  std::vector<double> row(box.dim(), 0.0), col(box.dim(), 0.0);
  for (const Site& h : shifts) {
    const cplx ca = a.at(h.n, h.m), cb = b.at(h.n, h.m);
    for (int kn = std::max(-R, -R - h.n); kn <= std::min(R, R - h.n); ++kn)
      for (int km = std::max(-R, -R - h.m); km <= std::min(R, R - h.m); ++km) {
        const int k = box.index(kn, km), g = box.index(kn + h.n, km + h.m);
        if (w[k] == 0.0 && w[g] == 0.0) continue;
        cplx e = 0.0;
        if (ca != cplx(0.0)) e += ca * cocycle(a.theta(), h.n, h.m, kn, km) * w[k];
        if (cb != cplx(0.0)) e -= w[g] * cb * cocycle(b.theta(), h.n, h.m, kn, km);
        const double v = std::abs(e);
        row[g] += v;
        col[k] += v;
      }
  }
  return std::sqrt(*std::max_element(row.begin(), row.end()) * *std::max_element(col.begin(), col.end())) +
         s.dropped;
}

void ModularBridge::validate() const {
  params_a.validate();
  params_b.validate();
  if (anchors.empty()) throw ParameterError("bridge: empty anchor family");
  if (anchors.size() != co_anchors.size())
    throw ParameterError("bridge: anchor and co-anchor families differ in length");
  for (const auto& t : anchors) {
    if (t.dnorm_upper > 1.0 + 1e-9) throw ParameterError("bridge: anchor outside the D-norm unit ball");
    if (t.v.dim() != params_a.d) throw DimensionError("bridge: anchor dimension");
  }
  for (const auto& t : co_anchors) {
    if (t.dnorm_upper > 1.0 + 1e-9) throw ParameterError("bridge: co-anchor outside the D-norm unit ball");
    if (t.v.dim() != params_b.d) throw DimensionError("bridge: co-anchor dimension");
  }
}

ReachResult modular_reach(const ModularBridge& bridge, int box_radius, const InnerOptions& inner,
                          const BridgeNormOptions& opts) {
  bridge.validate();
  const std::size_t J = bridge.anchors.size();
  ReachResult out;
  out.matrix.assign(J, std::vector<NormInterval>(J));
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k) {
      InnerProductResult ia =
          module_inner(bridge.anchors[j].v, bridge.anchors[k].v, bridge.params_a, box_radius, inner);
      InnerProductResult ib = module_inner(bridge.co_anchors[j].v, bridge.co_anchors[k].v,
                                           bridge.params_b, box_radius, inner);
      NormInterval n = bridge_norm(ia.element, ib.element, bridge.pivot, opts);
      // truncated coefficients act with norm at most their l1 mass
      n.upper += ia.tail_bound + ib.tail_bound;
      out.value = std::max(out.value, n.upper);
      out.matrix[j][k] = n;
    }
  return out;
}

PivotSpec select_fejer_pivot(const ModularBridge& bridge, const std::vector<int>& candidates,
                             int box_radius, const InnerOptions& inner, const BridgeNormOptions& opts) {
  if (candidates.empty()) throw ParameterError("select_fejer_pivot: no candidates");
  PivotSpec best = PivotSpec::fejer(candidates.front());
  double best_reach = 1e300;
  ModularBridge trial = bridge;
  for (int N : candidates) {
    trial.pivot = PivotSpec::fejer(N);
    const double r = modular_reach(trial, box_radius, inner, opts).value;
    if (r < best_reach) {
      best_reach = r;
      best = trial.pivot;
    }
  }
  return best;
}

BasicLengthEstimate basic_length_estimate(double theta, double vartheta, const PivotSpec& pivot,
                                          int sample_budget, std::uint64_t seed,
                                          const BridgeNormOptions& opts) {
  if (sample_budget < 1) throw ParameterError("basic_length_estimate: sample_budget must be >= 1");
  constexpr int K = 2;  // monomial radius of the samples
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;

  // vector states live on the pivot's support
  const int Rs = std::max(1, pivot.support_radius());
  const Box sbox{Rs};

  BasicLengthEstimate out;
  for (int i = 0; i < sample_budget; ++i) {
    TorusElement c(theta);
    for (int n = -K; n <= K; ++n)
      for (int m = -K; m <= K; ++m) c.add(n, m, cplx(g(rng), g(rng)));
    TorusElement a = fejer_truncate(c.real_part(), K + 1);
    double L = 0.0;
    for (const auto& [s, v] : a.coeffs()) L += std::abs(v) * dual_plane_norm(PlaneNorm::euclidean, s.n, s.m);
    if (L == 0.0) continue;
    a = a * cplx(1.0 / L);
    TorusElement b(vartheta, a.coeffs());

    out.reach_proxy = std::max({out.reach_proxy, bridge_norm(a, b, pivot, opts).upper,
                                bridge_norm(b, a, pivot, opts).upper});

    std::vector<cplx> xi(sbox.dim());
    double nrm = 0.0;
    for (int n = -Rs; n <= Rs; ++n)
      for (int m = -Rs; m <= Rs; ++m) {
        cplx z = pivot.weight(n, m) * cplx(g(rng), g(rng));
        xi[sbox.index(n, m)] = z;
        nrm += std::norm(z);
      }
    if (nrm == 0.0) continue;
    for (auto& z : xi) z /= std::sqrt(nrm);
    std::vector<cplx> ya(sbox.dim()), yb(sbox.dim());
    GnsOperator(a, Rs).apply(xi.data(), ya.data());
    GnsOperator(b, Rs).apply(xi.data(), yb.data());
    cplx d = 0.0;
    for (int k = 0; k < sbox.dim(); ++k) d += std::conj(xi[k]) * (ya[k] - yb[k]);
    out.height_proxy = std::max(out.height_proxy, std::abs(d));
  }
  out.value = std::max(out.reach_proxy, out.height_proxy);
  return out;
}

double BridgeLengthReport::assemble(double basic, double imprint_a, double imprint_b, double reach) {
  return std::max(basic, std::max(imprint_a, imprint_b) + reach);
}

BridgeLengthReport bridge_length(const ModularBridge& bridge, const ImprintInputs& imprint,
                                 const BridgeLengthOptions& opts) {
  bridge.validate();
  BridgeLengthReport r;
  r.theta = bridge.params_a.theta;
  r.vartheta = bridge.params_b.theta;

  ReachResult reach = modular_reach(bridge, opts.box_radius, opts.inner, opts.norm);
  r.bridge_norms = std::move(reach.matrix);
  r.modular_reach = reach.value;

  std::vector<SchwartzVector> va, vb;
  for (const auto& t : bridge.anchors) va.push_back(t.v);
  for (const auto& t : bridge.co_anchors) vb.push_back(t.v);
  if (!imprint.samples_a.empty() && !imprint.testers_a.empty())
    r.imprint_a = imprint_estimate(va, imprint.samples_a, imprint.testers_a, bridge.params_a,
                                   opts.box_radius, opts.inner);
  if (!imprint.samples_b.empty() && !imprint.testers_b.empty())
    r.imprint_b = imprint_estimate(vb, imprint.samples_b, imprint.testers_b, bridge.params_b,
                                   opts.box_radius, opts.inner);

  r.basic = basic_length_estimate(r.theta, r.vartheta, bridge.pivot, opts.sample_budget, opts.seed,
                                  opts.norm);
  r.total_length = BridgeLengthReport::assemble(r.basic.value, r.imprint_a, r.imprint_b, r.modular_reach);
  r.propinquity_upper = r.total_length;
  return r;
}

}  // namespace nct
