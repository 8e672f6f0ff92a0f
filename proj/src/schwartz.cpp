#include "nct/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nct/special.hpp"

namespace nct {

struct SchwartzVector::Node {
  int dim = 1;
  double decay = 0.0;
  double lo = 0.0, hi = 0.0;
  bool zero = false;
  virtual ~Node() = default;
  /// Writes orders 0..order at n points into out (Jet layout).
  virtual void eval(const double* s, std::size_t n, int order, cplx* out) const = 0;
};

namespace {

using Node = SchwartzVector::Node;
using NodePtr = std::shared_ptr<const Node>;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct ZeroNode final : Node {
  explicit ZeroNode(int d) {
    dim = d;
    zero = true;
  }
  void eval(const double*, std::size_t n, int order, cplx* out) const override {
    std::fill(out, out + (order + 1) * n * dim, cplx(0.0));
  }
};

/// sum_j c[j][comp] (2 pi eth)^{1/4} h_j(sqrt(2 pi eth) s), h_j orthonormal Hermite functions.
struct HermiteNode final : Node {
  double kappa;
  int J;
  // deriv[o] has (J + 1 + o) rows and dim columns: coefficients of d^o/dx^o in the h_j basis.
  std::vector<Eigen::MatrixXcd> deriv;

  HermiteNode(double eth, const std::vector<std::vector<cplx>>& coeffs) {
    dim = static_cast<int>(coeffs.front().size());
    J = static_cast<int>(coeffs.size()) - 1;
    kappa = std::sqrt(kTwoPi * eth);
    Eigen::MatrixXcd c0(J + 1, dim);
    for (int j = 0; j <= J; ++j)
      for (int c = 0; c < dim; ++c) c0(j, c) = coeffs[j][c];
    deriv.push_back(c0);
    for (int o = 1; o <= kMaxInternalOrder; ++o) {
      const Eigen::MatrixXcd& p = deriv.back();
      const int rows = static_cast<int>(p.rows());
      Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(rows + 1, dim);
      // h_j' = sqrt(j/2) h_{j-1} - sqrt((j+1)/2) h_{j+1}
      for (int j = 0; j < rows; ++j) {
        if (j > 0) q.row(j - 1) += std::sqrt(j / 2.0) * p.row(j);
        q.row(j + 1) -= std::sqrt((j + 1) / 2.0) * p.row(j);
      }
      deriv.push_back(std::move(q));
    }
    double r = (std::sqrt(2.0 * (J + kMaxInternalOrder) + 1.0) + 7.5) / kappa;
    lo = -r;
    hi = r;
  }

  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    const int jmax = J + order;
    std::vector<double> h(jmax + 1);
    const double pref = std::sqrt(kappa);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = kappa * s[k];
      hermite_functions(x, jmax, h.data());
      double scale = pref;
      for (int o = 0; o <= order; ++o) {
        const Eigen::MatrixXcd& D = deriv[o];
        cplx* dst = out + (o * n + k) * dim;
        for (int c = 0; c < dim; ++c) {
          cplx acc = 0.0;
          for (int j = 0; j < D.rows(); ++j) acc += D(j, c) * h[j];
          dst[c] = scale * acc;
        }
        scale *= kappa;
      }
    }
  }
};

struct DilateNode final : Node {
  double r;
  NodePtr child;
  DilateNode(double r_, NodePtr ch) : r(r_), child(std::move(ch)) {
    dim = child->dim;
    zero = child->zero;
    double a = std::abs(r);
    decay = child->decay * std::max(1.0, std::pow(a, 4)) * std::max(1.0, 1.0 / a) *
            std::max(1.0, 1.0 / (a * a));
    lo = std::min(child->lo / r, child->hi / r);
    hi = std::max(child->lo / r, child->hi / r);
  }
  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = r * s[k];
    child->eval(t.data(), n, order, out);
    double f = 1.0;
    for (int o = 0; o <= order; ++o) {
      if (o > 0) {
        f *= r;
        for (std::size_t i = o * n * dim; i < (o + 1) * n * dim; ++i) out[i] *= f;
      }
    }
  }
};

/// sum_i coef_i[c] e^{2 pi i (phase_i + freq_i s)} child_{(c - k_i) mod d}(s + shift_i)
struct ShiftTerm {
  double freq = 0.0, shift = 0.0, phase = 0.0;
  std::vector<cplx> coef;
  int k = 0;
};

double term_factor(const ShiftTerm& t) {
  double cmax = 0.0;
  for (const auto& c : t.coef) cmax = std::max(cmax, std::abs(c));
  return cmax * std::pow(1.0 + kTwoPi * std::abs(t.freq), 4) * 2.0 * (1.0 + t.shift * t.shift) *
         (1.0 + std::abs(t.shift));
}

struct ShiftSumNode final : Node {
  NodePtr child;
  std::vector<ShiftTerm> terms;
  std::map<double, std::vector<int>> groups;  // shift -> term indices

  ShiftSumNode(NodePtr ch, std::vector<ShiftTerm> ts) : child(std::move(ch)), terms(std::move(ts)) {
    dim = child->dim;
    zero = child->zero || terms.empty();
    decay = 0.0;
    lo = 1e300;
    hi = -1e300;
    for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
      const auto& t = terms[i];
      groups[t.shift].push_back(i);
      decay += term_factor(t) * child->decay;
      lo = std::min(lo, child->lo - t.shift);
      hi = std::max(hi, child->hi - t.shift);
    }
    if (terms.empty()) lo = hi = 0.0;
  }

  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    std::fill(out, out + (order + 1) * n * dim, cplx(0.0));
    std::vector<double> t(n);
    std::vector<cplx> cj((order + 1) * n * dim);
    std::vector<cplx> pw(order + 1);
    for (const auto& [shift, idx] : groups) {
      for (std::size_t k = 0; k < n; ++k) t[k] = s[k] + shift;
      child->eval(t.data(), n, order, cj.data());
      for (int ti : idx) {
        const ShiftTerm& tm = terms[ti];
        const cplx w(0.0, kTwoPi * tm.freq);
        pw[0] = 1.0;
        for (int o = 1; o <= order; ++o) pw[o] = pw[o - 1] * w;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx e = std::polar(1.0, kTwoPi * (tm.phase + tm.freq * s[k]));
          for (int o = 0; o <= order; ++o) {
            cplx* dst = out + (o * n + k) * dim;
            for (int l = 0; l <= o; ++l) {
              const cplx f = e * binom(o, l) * pw[o - l];
              const cplx* src = cj.data() + (l * n + k) * dim;
              for (int c = 0; c < dim; ++c) {
                int cc = ((c - tm.k) % dim + dim) % dim;
                dst[c] += tm.coef[c] * f * src[cc];
              }
            }
          }
        }
      }
    }
  }
};

struct LinCombNode final : Node {
  std::vector<cplx> coefs;
  std::vector<NodePtr> children;
  LinCombNode(std::vector<cplx> cs, std::vector<NodePtr> ch) : coefs(std::move(cs)), children(std::move(ch)) {
    dim = children.front()->dim;
    lo = 1e300;
    hi = -1e300;
    zero = true;
    for (std::size_t i = 0; i < children.size(); ++i) {
      decay += std::abs(coefs[i]) * children[i]->decay;
      if (children[i]->zero || coefs[i] == cplx(0.0)) continue;
      zero = false;
      lo = std::min(lo, children[i]->lo);
      hi = std::max(hi, children[i]->hi);
    }
    if (zero) lo = hi = 0.0;
  }
  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    const std::size_t len = (order + 1) * n * dim;
    std::fill(out, out + len, cplx(0.0));
    std::vector<cplx> tmp(len);
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (children[i]->zero || coefs[i] == cplx(0.0)) continue;
      children[i]->eval(s, n, order, tmp.data());
      for (std::size_t j = 0; j < len; ++j) out[j] += coefs[i] * tmp[j];
    }
  }
};

struct MixNode final : Node {
  Eigen::MatrixXcd M;
  NodePtr child;
  MixNode(Eigen::MatrixXcd m, NodePtr ch) : M(std::move(m)), child(std::move(ch)) {
    dim = static_cast<int>(M.rows());
    zero = child->zero;
    decay = M.norm() * child->decay;  // Frobenius dominates the operator norm
    lo = child->lo;
    hi = child->hi;
  }
  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    const int din = child->dim;
    std::vector<cplx> tmp((order + 1) * n * din);
    child->eval(s, n, order, tmp.data());
    for (std::size_t r = 0; r < (order + 1) * n; ++r) {
      Eigen::Map<const Eigen::VectorXcd> x(tmp.data() + r * din, din);
      Eigen::Map<Eigen::VectorXcd> y(out + r * dim, dim);
      y = M * x;
    }
  }
};

struct TimesSNode final : Node {
  NodePtr child;
  explicit TimesSNode(NodePtr ch) : child(std::move(ch)) {
    dim = child->dim;
    zero = child->zero;
    lo = child->lo;
    hi = child->hi;
  }
  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    // (s g)^(o) = s g^(o) + o g^(o-1)
    std::vector<cplx> tmp((order + 1) * n * dim);
    child->eval(s, n, order, tmp.data());
    for (int o = 0; o <= order; ++o)
      for (std::size_t k = 0; k < n; ++k)
        for (int c = 0; c < dim; ++c) {
          cplx v = s[k] * tmp[(o * n + k) * dim + c];
          if (o > 0) v += double(o) * tmp[((o - 1) * n + k) * dim + c];
          out[(o * n + k) * dim + c] = v;
        }
  }
};

struct DerivNode final : Node {
  NodePtr child;
  explicit DerivNode(NodePtr ch) : child(std::move(ch)) {
    dim = child->dim;
    zero = child->zero;
    lo = child->lo;
    hi = child->hi;
  }
  void eval(const double* s, std::size_t n, int order, cplx* out) const override {
    if (order + 1 > kMaxInternalOrder) throw ParameterError("derivative order too high");
    std::vector<cplx> tmp((order + 2) * n * dim);
    child->eval(s, n, order + 1, tmp.data());
    std::copy(tmp.begin() + n * dim, tmp.end(), out);
  }
};

/// Fills decay by sampling when no propagation rule applies.
NodePtr with_sampled_decay(std::shared_ptr<Node> node) {
  node->decay = 0.0;
  SchwartzVector v(node);
  node->decay = node->zero ? 0.0 : 1.25 * sampled_decay(v, 4000);
  return node;
}

struct Decomposed {
  NodePtr child;
  std::vector<ShiftTerm> terms;
};

Decomposed decompose(const SchwartzVector& v) {
  if (auto p = std::dynamic_pointer_cast<const ShiftSumNode>(v.node())) return {p->child, p->terms};
  ShiftTerm t;
  t.coef.assign(v.dim(), cplx(1.0));
  return {v.node(), {t}};
}

}  // namespace

SchwartzVector::SchwartzVector() : node_(std::make_shared<ZeroNode>(1)) {}
SchwartzVector::SchwartzVector(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SchwartzVector SchwartzVector::zero(int dim) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  return SchwartzVector(std::make_shared<ZeroNode>(dim));
}

SchwartzVector SchwartzVector::hermite_series(double eth,
                                              const std::vector<std::vector<cplx>>& coeffs) {
  if (!(eth > 0.0)) throw ParameterError("Hermite scale must be positive");
  if (coeffs.empty() || coeffs.front().empty()) throw ParameterError("empty Hermite series");
  for (const auto& row : coeffs)
    if (row.size() != coeffs.front().size()) throw DimensionError("ragged Hermite coefficients");
  auto node = std::make_shared<HermiteNode>(eth, coeffs);
  return SchwartzVector(with_sampled_decay(node));
}

SchwartzVector SchwartzVector::hermite(double eth, int j, int dim, int component) {
  if (j < 0) throw ParameterError("Hermite index must be >= 0");
  if (component < 0 || component >= dim) throw DimensionError("component out of range");
  std::vector<std::vector<cplx>> c(j + 1, std::vector<cplx>(dim, 0.0));
  c[j][component] = 1.0;
  return hermite_series(eth, c);
}

int SchwartzVector::dim() const { return node_->dim; }
double SchwartzVector::decay_constant() const { return node_->decay; }
std::pair<double, double> SchwartzVector::support() const { return {node_->lo, node_->hi}; }
bool SchwartzVector::is_zero() const { return node_->zero; }

Jet SchwartzVector::evaluate(std::span<const double> s, int order) const {
  if (order < 0 || order > kMaxPublicOrder) throw ParameterError("derivative order must be in 0..4");
  Jet j(dim(), order, s.size());
  node_->eval(s.data(), s.size(), order, j.data.data());
  return j;
}

std::vector<cplx> SchwartzVector::eval(int order, double s) const {
  Jet j = evaluate(std::span<const double>(&s, 1), order);
  return std::vector<cplx>(j.row(order, 0), j.row(order, 0) + dim());
}

SchwartzVector SchwartzVector::modulate(double freq, double shift, double phase) const {
  Decomposed d = decompose(*this);
  for (auto& t : d.terms) {
    t.phase = phase + t.phase + t.freq * shift;
    t.freq += freq;
    t.shift += shift;
  }
  return SchwartzVector(std::make_shared<ShiftSumNode>(d.child, std::move(d.terms)));
}

SchwartzVector SchwartzVector::monomial_mix(const std::vector<cplx>& coef, int k) const {
  const int d = dim();
  if (static_cast<int>(coef.size()) != d) throw DimensionError("monomial_mix: coefficient size");
  Decomposed dec = decompose(*this);
  for (auto& t : dec.terms) {
    std::vector<cplx> c(d);
    for (int i = 0; i < d; ++i) c[i] = coef[i] * t.coef[((i - k) % d + d) % d];
    t.coef = std::move(c);
    t.k = ((t.k + k) % d + d) % d;
  }
  return SchwartzVector(std::make_shared<ShiftSumNode>(dec.child, std::move(dec.terms)));
}

SchwartzVector SchwartzVector::mix(const Eigen::MatrixXcd& M) const {
  if (M.cols() != dim()) throw DimensionError("mix: matrix columns must equal dimension");
  return SchwartzVector(std::make_shared<MixNode>(M, node_));
}

SchwartzVector SchwartzVector::times_s() const {
  return SchwartzVector(with_sampled_decay(std::make_shared<TimesSNode>(node_)));
}

SchwartzVector SchwartzVector::derivative() const {
  return SchwartzVector(with_sampled_decay(std::make_shared<DerivNode>(node_)));
}

SchwartzVector SchwartzVector::scaled(cplx c) const { return linear_combine({c}, {*this}); }

SchwartzVector dilate(const SchwartzVector& xi, double r) {
  if (r == 0.0 || !std::isfinite(r)) throw ParameterError("dilation factor must be nonzero");
  if (r == 1.0) return xi;
  return SchwartzVector(std::make_shared<DilateNode>(r, xi.node()));
}

SchwartzVector linear_combine(const std::vector<cplx>& coeffs,
                              const std::vector<SchwartzVector>& vectors) {
  if (vectors.empty()) throw ParameterError("linear_combine: empty list");
  if (coeffs.size() != vectors.size()) throw DimensionError("linear_combine: size mismatch");
  const int d = vectors.front().dim();
  for (const auto& v : vectors)
    if (v.dim() != d) throw DimensionError("linear_combine: dimension mismatch");

  // Terms acting on the same underlying node merge into one shift sum.
  std::vector<NodePtr> order;
  std::map<const Node*, std::vector<ShiftTerm>> merged;
  std::vector<cplx> other_c;
  std::vector<NodePtr> other_n;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].is_zero() || coeffs[i] == cplx(0.0)) continue;
    Decomposed dec = decompose(vectors[i]);
    if (!merged.count(dec.child.get())) order.push_back(dec.child);
    auto& bucket = merged[dec.child.get()];
    for (auto& t : dec.terms) {
      for (auto& c : t.coef) c *= coeffs[i];
      bucket.push_back(std::move(t));
    }
  }
  if (order.empty()) return SchwartzVector::zero(d);
  for (const auto& ch : order) {
    other_c.push_back(1.0);
    other_n.push_back(std::make_shared<ShiftSumNode>(ch, std::move(merged[ch.get()])));
  }
  if (other_n.size() == 1) return SchwartzVector(other_n.front());
  return SchwartzVector(std::make_shared<LinCombNode>(std::move(other_c), std::move(other_n)));
}

SchwartzVector operator+(const SchwartzVector& a, const SchwartzVector& b) {
  return linear_combine({1.0, 1.0}, {a, b});
}

SchwartzVector operator-(const SchwartzVector& a, const SchwartzVector& b) {
  return linear_combine({1.0, -1.0}, {a, b});
}

QuadRule quadrature_for(const SchwartzVector& xi, const QuadratureSpec& quad) {
  if (quad.half_width > 0.0) return composite_rule(-quad.half_width, quad.half_width, quad);
  auto [lo, hi] = xi.support();
  return composite_rule(lo, hi, quad);
}

cplx l2_inner(const SchwartzVector& xi, const SchwartzVector& eta, const QuadratureSpec& quad) {
  if (xi.dim() != eta.dim()) throw DimensionError("l2_inner: dimension mismatch");
  if (xi.is_zero() || eta.is_zero()) return 0.0;
  QuadRule rule;
  if (quad.half_width > 0.0) {
    rule = composite_rule(-quad.half_width, quad.half_width, quad);
  } else {
    auto [a0, a1] = xi.support();
    auto [b0, b1] = eta.support();
    rule = composite_rule(std::max(a0, b0), std::min(a1, b1), quad);
  }
  if (rule.size() == 0) return 0.0;
  Jet a = xi.evaluate(rule.nodes, 0), b = eta.evaluate(rule.nodes, 0);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    cplx row = 0.0;
    for (int c = 0; c < xi.dim(); ++c) row += std::conj(a(0, k, c)) * b(0, k, c);
    acc += rule.weights[k] * row;
  }
  return acc;
}

double l2_norm(const SchwartzVector& xi, const QuadratureSpec& quad) {
  return std::sqrt(std::max(0.0, l2_inner(xi, xi, quad).real()));
}

double sampled_decay(const SchwartzVector& xi, int samples) {
  if (xi.is_zero()) return 0.0;
  auto [lo, hi] = xi.support();
  const double pad = 1.0 + 0.25 * (hi - lo);
  std::vector<double> s(samples);
  for (int i = 0; i < samples; ++i) s[i] = lo - pad + (hi - lo + 2 * pad) * i / (samples - 1.0);
  Jet j(xi.dim(), kMaxPublicOrder, s.size());
  xi.node()->eval(s.data(), s.size(), kMaxPublicOrder, j.data.data());
  double best = 0.0;
  for (int o = 0; o <= kMaxPublicOrder; ++o)
    for (std::size_t k = 0; k < s.size(); ++k) {
      double v = 0.0;
      for (int c = 0; c < xi.dim(); ++c) v += std::norm(j(o, k, c));
      v = std::sqrt(v);
      best = std::max(best, (1.0 + s[k] * s[k]) * std::max(v, std::abs(s[k]) * v));
    }
  return best;
}

double certificate_tail(const SchwartzVector& xi, double half_width) {
  return xi.decay_constant() * (kPi - 2.0 * std::atan(half_width));
}

}  // namespace nct
