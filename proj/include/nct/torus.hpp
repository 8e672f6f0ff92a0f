#pragma once

#include <Eigen/Dense>
#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nct/common.hpp"
#include "nct/lanczos.hpp"

namespace nct {

struct Site {
  int n = 0;
  int m = 0;
  auto operator<=>(const Site&) const = default;
  Site operator+(const Site& o) const { return {n + o.n, m + o.m}; }
  Site operator-(const Site& o) const { return {n - o.n, m - o.m}; }
  Site operator-() const { return {-n, -m}; }
};

inline constexpr double kDropThreshold = 1e-15;

/// Finitely supported element of the twisted group algebra of Z^2.
class TorusElement {
 public:
  using Map = std::map<Site, cplx>;

  TorusElement() = default;
  explicit TorusElement(double theta) : theta_(theta) {}
  TorusElement(double theta, Map coeffs);

  static TorusElement unit(double theta) { return monomial(theta, 0, 0); }
  static TorusElement monomial(double theta, int n, int m, cplx c = 1.0);
  static TorusElement U(double theta) { return monomial(theta, 1, 0); }
  static TorusElement V(double theta) { return monomial(theta, 0, 1); }

  double theta() const { return theta_; }
  const Map& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  cplx at(int n, int m) const;

  /// Adds c at (n,m); entries that fall below the drop threshold are erased.
  void add(int n, int m, cplx c);

  double l1_norm() const;
  int support_radius() const;  // max(|n|,|m|) over the support

  TorusElement operator+(const TorusElement& o) const;
  TorusElement operator-(const TorusElement& o) const;
  TorusElement operator*(cplx s) const;

  TorusElement real_part() const;  // (a + a*)/2
  TorusElement imag_part() const;  // (a - a*)/(2i)

 private:
  void prune();
  double theta_ = 0.0;
  Map coeffs_;
};

cplx cocycle(double theta, double x1, double y1, double x2, double y2);
inline cplx cocycle(double theta, Site g1, Site g2) {
  return cocycle(theta, g1.n, g1.m, g2.n, g2.m);
}

TorusElement twisted_product(const TorusElement& a, const TorusElement& b);
TorusElement involution(const TorusElement& a);
bool is_self_adjoint(const TorusElement& a, double tol = 1e-12);

/// Largest |a - b| over the union of supports.
double max_coeff_distance(const TorusElement& a, const TorusElement& b);

/// Box [-R,R]^2 in lexicographic order.
struct Box {
  int radius = 1;
  int side() const { return 2 * radius + 1; }
  int dim() const { return side() * side(); }
  int index(int n, int m) const { return (n + radius) * side() + (m + radius); }
  bool contains(int n, int m) const {
    return n >= -radius && n <= radius && m >= -radius && m <= radius;
  }
};

/// Left regular action of `a` compressed to a box, applied without forming the matrix.
class GnsOperator {
 public:
  GnsOperator(const TorusElement& a, int box_radius);
  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  void apply(const cplx* x, cplx* y) const;
  void apply_adjoint(const cplx* x, cplx* y) const;

 private:
  struct Term {
    Site h;
    cplx c;
    std::vector<cplx> px;  // e^{i pi theta k_n h_m}
    std::vector<cplx> py;  // e^{-i pi theta h_n k_m}
  };
  Box box_;
  std::vector<Term> terms_;
};

Eigen::MatrixXcd gns_matrix(const TorusElement& a, int box_radius);

struct TorusNormOptions {
  LanczosOptions lanczos{};
  const std::vector<cplx>* warm_start = nullptr;
  std::vector<cplx>* ritz_out = nullptr;  // receives the Ritz vector
};

/// [GNS lower bound, l1 upper bound].
NormInterval torus_norm(const TorusElement& a, int box_radius,
                        const TorusNormOptions& opts = {});

/// Doubles the box until the lower bound changes by less than rel_tol.
NormInterval torus_norm_refined(const TorusElement& a, int box_radius = 16,
                                int max_radius = 64, double rel_tol = 1e-3);

TorusElement beta_act(const TorusElement& a, double x, double y);
double fejer_weight(int n, int m, int N);
TorusElement fejer_truncate(const TorusElement& a, int N);

/// max over (n,m) != 0 with |n|,|m| <= support_radius of (1 - w)/dual_norm.
double fejer_constant(int N, PlaneNorm norm, int support_radius);

NormInterval l_seminorm(const TorusElement& a, int box_radius, int direction_samples,
                        PlaneNorm norm = PlaneNorm::euclidean);

void write_torus_element(std::ostream& os, const TorusElement& a);
TorusElement read_torus_element(std::istream& is);

}  // namespace nct
