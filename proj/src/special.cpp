#include "nct/special.hpp"

#include <algorithm>
#include <cmath>

namespace nct {

double laguerre(int j, double t) {
  if (j < 0) throw ParameterError("Laguerre index must be >= 0");
  return std::laguerre(static_cast<unsigned>(j), t);
}

void hermite_functions(double x, int jmax, double* out) {
  out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (jmax >= 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (int j = 1; j < jmax; ++j)
    out[j + 1] = std::sqrt(2.0 / (j + 1)) * x * out[j] - std::sqrt(double(j) / (j + 1)) * out[j - 1];
}

double hermite_fn(double eth, int j, double t) {
  if (!(eth > 0.0)) throw ParameterError("Hermite scale must be positive");
  if (j < 0) throw ParameterError("Hermite index must be >= 0");
  const double kappa = std::sqrt(kTwoPi * eth);
  std::vector<double> h(j + 1);
  hermite_functions(kappa * t, j, h.data());
  return std::sqrt(kappa) * h[j];
}

double psi(double eth, int j, double r) {
  if (!(eth > 0.0)) throw ParameterError("psi: scale must be positive");
  const double u = kPi * eth * r * r;
  return eth * std::exp(-0.5 * u) * laguerre(j, u);
}

RadialProfile RadialProfile::scaled(double c) const {
  RadialProfile g = *this;
  auto inner = f;
  g.f = [inner, c](double r) { return c * inner(r); };
  g.nonnegative = nonnegative && c >= 0.0;
  return g;
}

RadialProfile zero_profile() { return RadialProfile{[](double) { return 0.0; }, 0.0, true}; }

RadialProfile bump_profile(double radius) {
  if (!(radius > 0.0)) throw ParameterError("bump radius must be positive");
  return RadialProfile{[radius](double r) {
                         double x = r / radius;
                         if (x >= 1.0) return 0.0;
                         return std::exp(1.0 - 1.0 / (1.0 - x * x));
                       },
                       radius, true};
}

double l1_rdr(const RadialProfile& f, int points_per_unit) {
  return l1_rdr_distance(f, zero_profile(), f.support, points_per_unit);
}

double l1_rdr_distance(const RadialProfile& f, const RadialProfile& g, double upto,
                       int points_per_unit) {
  QuadratureSpec spec;
  spec.points_per_unit = points_per_unit;
  QuadRule rule = composite_rule(0.0, upto, spec);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    double r = rule.nodes[k];
    acc += rule.weights[k] * std::abs(f(r) - g(r)) * r;
  }
  return acc;
}

std::string to_string(CesaroNormalization n) {
  return n == CesaroNormalization::literal ? "literal" : "orthonormal";
}

namespace {

/// psi_eth^k(r) for k = 0..N.
void psi_all(double eth, int N, double r, double* out) {
  const double u = kPi * eth * r * r;
  const double e = eth * std::exp(-0.5 * u);
  double lm = 1.0, l = 1.0 - u;
  out[0] = e;
  if (N >= 1) out[1] = e * l;
  for (int k = 1; k < N; ++k) {
    double ln = ((2.0 * k + 1.0 - u) * l - k * lm) / (k + 1.0);
    lm = l;
    l = ln;
    out[k + 1] = e * l;
  }
}

double approximant_radius(double eth, int N) {
  return std::sqrt((4.0 * N + 80.0) / (kPi * eth));
}

}  // namespace

CesaroResult cesaro_sum(const RadialProfile& f, double eth, int N, CesaroNormalization norm,
                        int points_per_unit) {
  if (N < 0) throw ParameterError("Cesaro order must be >= 0");
  if (!(eth > 0.0)) throw ParameterError("Cesaro scale must be positive");
  CesaroResult out;
  out.normalization = norm;
  out.coefficients.assign(N + 1, 0.0);

  QuadratureSpec spec;
  spec.points_per_unit = points_per_unit;
  QuadRule rule = composite_rule(0.0, f.support, spec);
  std::vector<double> p(N + 1);
  std::vector<double> moment(N + 1, 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double fr = f(r);
    if (fr == 0.0) continue;
    psi_all(eth, N, r, p.data());
    for (int k = 0; k <= N; ++k) {
      double integrand = norm == CesaroNormalization::literal ? fr * p[k] * p[k] : fr * p[k];
      moment[k] += rule.weights[i] * integrand * r;
    }
  }

  if (norm == CesaroNormalization::literal) {
    for (int k = 0; k <= N; ++k) {
      double w = 0.0;
      for (int j = k; j <= N; ++j) w += double(j + 1 - k) / (j + 1);
      out.coefficients[k] = w * moment[k];
    }
  } else {
    // psi-hat = psi sqrt(2 pi / eth) is orthonormal in L2(r dr).
    const double c2 = kTwoPi / eth;
    for (int k = 0; k <= N; ++k)
      out.coefficients[k] = (1.0 - double(k) / (N + 1)) * moment[k] * c2;
  }

  auto coeffs = out.coefficients;
  out.approx.support = std::max(f.support, approximant_radius(eth, N));
  out.approx.f = [coeffs, eth, N](double r) {
    std::vector<double> q(N + 1);
    psi_all(eth, N, r, q.data());
    double s = 0.0;
    for (int k = 0; k <= N; ++k) s += coeffs[k] * q[k];
    return s;
  };
  return out;
}

double cesaro_error(const RadialProfile& f, double eth, int N, CesaroNormalization norm) {
  CesaroResult c = cesaro_sum(f, eth, N, norm);
  return l1_rdr_distance(f, c.approx, c.approx.support, 64);
}

CesaroNormalization select_cesaro_normalization(const RadialProfile& f, double eth,
                                                const std::vector<int>& Ns,
                                                std::vector<double>* errors) {
  auto sweep = [&](CesaroNormalization n) {
    std::vector<double> e;
    for (int N : Ns) e.push_back(cesaro_error(f, eth, N, n));
    return e;
  };
  auto decreasing = [](const std::vector<double>& e) {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!(e[i] < e[i - 1])) return false;
    return true;
  };
  std::vector<double> e = sweep(CesaroNormalization::literal);
  CesaroNormalization chosen = CesaroNormalization::literal;
  if (!decreasing(e)) {
    chosen = CesaroNormalization::orthonormal;
    e = sweep(chosen);
  }
  if (errors) *errors = e;
  return chosen;
}

}  // namespace nct
