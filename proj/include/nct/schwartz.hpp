#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "nct/common.hpp"
#include "nct/quadrature.hpp"

namespace nct {

inline constexpr int kMaxPublicOrder = 4;
inline constexpr int kMaxInternalOrder = 8;

/// Values of a C^d valued function and its derivatives at a batch of points.
struct Jet {
  int dim = 1;
  int order = 0;
  std::size_t npts = 0;
  std::vector<cplx> data;  // [(o * npts + k) * dim + c]

  Jet() = default;
  Jet(int d, int ord, std::size_t n) : dim(d), order(ord), npts(n), data((ord + 1) * n * d) {}
  cplx& operator()(int o, std::size_t k, int c) { return data[(o * npts + k) * dim + c]; }
  cplx operator()(int o, std::size_t k, int c) const { return data[(o * npts + k) * dim + c]; }
  cplx* row(int o, std::size_t k) { return &data[(o * npts + k) * dim]; }
  const cplx* row(int o, std::size_t k) const { return &data[(o * npts + k) * dim]; }
};

/// Rapidly decaying C^d valued function on the line, built from closed-form
/// pieces so derivatives are exact.  Immutable; copies share structure.
class SchwartzVector {
 public:
  struct Node;

  SchwartzVector();  // zero vector in dimension 1
  explicit SchwartzVector(std::shared_ptr<const Node> node);

  static SchwartzVector zero(int dim);
  /// sum_j coeffs[j][c] * H_eth^j(s) e_c
  static SchwartzVector hermite_series(double eth, const std::vector<std::vector<cplx>>& coeffs);
  static SchwartzVector hermite(double eth, int j, int dim = 1, int component = 0);
  /// 2^{1/4} e^{-pi s^2} in component `component`.
  static SchwartzVector gaussian(int dim = 1, int component = 0) {
    return hermite(1.0, 0, dim, component);
  }

  int dim() const;
  /// M with max(|f^(n)(s)|, |s f^(n)(s)|) <= M / (1 + s^2) for n <= 4.
  double decay_constant() const;
  /// Interval outside of which every component and derivative is negligible.
  std::pair<double, double> support() const;
  bool is_zero() const;

  Jet evaluate(std::span<const double> s, int order = 0) const;
  std::vector<cplx> eval(int order, double s) const;

  /// s -> e^{2 pi i (phase + freq s)} xi(s + shift)
  SchwartzVector modulate(double freq, double shift, double phase) const;
  /// Component action of the monomial matrix e_c -> coef[(c+k) mod d] e_{(c+k) mod d}.
  SchwartzVector monomial_mix(const std::vector<cplx>& coef, int k) const;
  SchwartzVector mix(const Eigen::MatrixXcd& M) const;
  SchwartzVector times_s() const;
  SchwartzVector derivative() const;
  SchwartzVector scaled(cplx c) const;

  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

SchwartzVector dilate(const SchwartzVector& xi, double r);
SchwartzVector linear_combine(const std::vector<cplx>& coeffs,
                              const std::vector<SchwartzVector>& vectors);
SchwartzVector operator+(const SchwartzVector& a, const SchwartzVector& b);
SchwartzVector operator-(const SchwartzVector& a, const SchwartzVector& b);

/// Conjugate-linear in the first slot.
cplx l2_inner(const SchwartzVector& xi, const SchwartzVector& eta, const QuadratureSpec& quad = {});
double l2_norm(const SchwartzVector& xi, const QuadratureSpec& quad = {});

/// Quadrature rule covering the essential support of xi (or [-S,S] if set).
QuadRule quadrature_for(const SchwartzVector& xi, const QuadratureSpec& quad);

/// Sampled sup of (1 + s^2) max(|f^(n)(s)|, |s f^(n)(s)|) over n <= 4.
double sampled_decay(const SchwartzVector& xi, int samples = 10000);

/// Tail bound M * int_{|s|>S} ds/(1+s^2) of the decay certificate.
double certificate_tail(const SchwartzVector& xi, double half_width);

}  // namespace nct
