#include <cmath>
#include <random>

#include "doctest.h"
#include "nct/schwartz.hpp"
#include "nct/special.hpp"

using namespace nct;

namespace {

// Physicists' Hermite polynomial through the standard library, an independent path.
double hermite_fn_oracle(double eth, int j, double t) {
  double x = std::sqrt(kTwoPi * eth) * t;
  double norm = std::pow(2.0, 0.25) / std::sqrt(std::tgamma(j + 1.0) * std::pow(2.0, j));
  return std::pow(eth, 0.25) * norm * std::exp(-x * x / 2) * std::hermite(j, x);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

}  // namespace

TEST_CASE("hermite vector matches the closed form and its derivatives") {
  SchwartzVector h = SchwartzVector::hermite(0.7, 5);
  auto s = linspace(-3, 3, 41);
  Jet j = h.evaluate(s, 4);
  const double eps = 1e-5;
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(std::abs(j(0, k, 0) - hermite_fn_oracle(0.7, 5, s[k])) < 1e-12);
    // central differences for the first derivative
    double fd = (hermite_fn_oracle(0.7, 5, s[k] + eps) - hermite_fn_oracle(0.7, 5, s[k] - eps)) / (2 * eps);
    CHECK(std::abs(j(1, k, 0) - fd) < 1e-6);
    double fd2 = (hermite_fn_oracle(0.7, 5, s[k] + eps) - 2 * hermite_fn_oracle(0.7, 5, s[k]) +
                  hermite_fn_oracle(0.7, 5, s[k] - eps)) / (eps * eps);
    CHECK(std::abs(j(2, k, 0) - fd2) < 1e-3);
  }
  // fourth derivative from differences of the third
  for (std::size_t k = 0; k < s.size(); ++k) {
    auto p = h.eval(3, s[k] + eps), m = h.eval(3, s[k] - eps);
    CHECK(std::abs(j(4, k, 0) - (p[0] - m[0]) / (2 * eps)) < 1e-4 * (1 + std::abs(j(4, k, 0))));
  }
}

TEST_CASE("dilation") {
  SchwartzVector g = SchwartzVector::gaussian();
  CHECK(dilate(g, 1.0).node() == g.node());
  SchwartzVector g2 = dilate(g, 2.0);
  for (double s : {-1.0, -0.3, 0.0, 0.4, 1.2})
    CHECK(std::abs(g2.eval(0, s)[0] - std::pow(2.0, 0.25) * std::exp(-4 * kPi * s * s)) < 1e-14);
  CHECK_THROWS_AS(dilate(g, 0.0), ParameterError);

  // ||xi(r .)||_2 = |r|^{-1/2} ||xi||_2
  SchwartzVector h = SchwartzVector::hermite(1.0, 3);
  for (double r : {0.5, 1.7, -2.3}) CHECK(l2_norm(dilate(h, r)) == doctest::Approx(std::pow(std::abs(r), -0.5)).epsilon(1e-10));

  // composition
  SchwartzVector a = dilate(dilate(h, 1.3), -0.6), b = dilate(h, 1.3 * -0.6);
  for (double s : linspace(-2, 2, 17))
    for (int o = 0; o <= 4; ++o) CHECK(std::abs(a.eval(o, s)[0] - b.eval(o, s)[0]) < 1e-10);
}

TEST_CASE("l2 inner product") {
  SchwartzVector g = SchwartzVector::gaussian();
  CHECK(l2_inner(g, g).real() == doctest::Approx(1.0).epsilon(1e-13));
  for (int j = 0; j <= 12; ++j)
    for (int k = 0; k <= 12; ++k) {
      cplx v = l2_inner(SchwartzVector::hermite(1.0, j), SchwartzVector::hermite(1.0, k));
      CHECK(std::abs(v - (j == k ? 1.0 : 0.0)) < 1e-12);
    }
  SchwartzVector a = SchwartzVector::hermite(0.8, 2).modulate(0.3, 0.2, 0.1);
  SchwartzVector b = SchwartzVector::hermite(1.1, 4).modulate(-0.5, -0.4, 0.0);
  CHECK(std::abs(l2_inner(a, b) - std::conj(l2_inner(b, a))) < 1e-14);
  CHECK(std::abs(l2_inner(a, b)) <= l2_norm(a) * l2_norm(b) + 1e-14);
  // conjugate-linear first slot
  cplx c(0.3, -1.2);
  CHECK(std::abs(l2_inner(a.scaled(c), b) - std::conj(c) * l2_inner(a, b)) < 1e-13);
  CHECK_THROWS_AS(l2_inner(SchwartzVector::gaussian(1), SchwartzVector::gaussian(2)), DimensionError);
}

TEST_CASE("quadrature self-consistency under doubling") {
  QuadratureSpec coarse, fine;
  fine.points_per_unit = 2 * coarse.points_per_unit;
  for (int j = 0; j <= 12; ++j) {
    SchwartzVector a = SchwartzVector::hermite(1.0, j), b = SchwartzVector::hermite(0.6, j / 2);
    CHECK(std::abs(l2_inner(a, b, coarse) - l2_inner(a, b, fine)) < 1e-9);
  }
}

TEST_CASE("linear combinations") {
  SchwartzVector h = SchwartzVector::hermite(1.0, 2);
  SchwartzVector one = linear_combine({1.0}, {h});
  for (double s : linspace(-2, 2, 9)) CHECK(std::abs(one.eval(2, s)[0] - h.eval(2, s)[0]) < 1e-15);
  CHECK(linear_combine({0.0}, {h}).is_zero());
  CHECK_THROWS_AS(linear_combine({}, {}), ParameterError);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> cs;
    std::vector<SchwartzVector> vs;
    double bound = 0.0, mbound = 0.0;
    for (int i = 0; i < 4; ++i) {
      cs.emplace_back(g(rng), g(rng));
      vs.push_back(SchwartzVector::hermite(0.5 + 0.25 * i, i).modulate(g(rng), 0.3 * g(rng), 0.0));
      bound += std::abs(cs.back()) * l2_norm(vs.back());
      mbound += std::abs(cs.back()) * vs.back().decay_constant();
    }
    SchwartzVector v = linear_combine(cs, vs);
    CHECK(l2_norm(v) <= bound + 1e-12);
    CHECK(v.decay_constant() <= mbound * (1 + 1e-12));
  }
}

TEST_CASE("decay certificate holds on dense samples") {
  std::vector<SchwartzVector> family = {
      SchwartzVector::gaussian(),
      SchwartzVector::hermite(1.0, 7),
      dilate(SchwartzVector::hermite(0.5, 3), 1.8),
      dilate(SchwartzVector::hermite(1.0, 4), 0.4),
      SchwartzVector::hermite(1.0, 2).modulate(0.7, -0.9, 0.25),
      SchwartzVector::hermite(1.0, 1).times_s(),
      SchwartzVector::hermite(1.0, 2).derivative(),
  };
  for (const auto& v : family) {
    double M = v.decay_constant();
    CHECK(M > 0.0);
    CHECK(sampled_decay(v, 10000) <= M * (1 + 1e-12));
  }
}

TEST_CASE("modulation, times_s and derivative nodes") {
  SchwartzVector h = SchwartzVector::hermite(1.0, 3);
  SchwartzVector m = h.modulate(0.4, 0.25, 0.1);
  for (double s : linspace(-2, 2, 11)) {
    cplx expect = std::polar(1.0, kTwoPi * (0.1 + 0.4 * s)) * h.eval(0, s + 0.25)[0];
    CHECK(std::abs(m.eval(0, s)[0] - expect) < 1e-14);
    const double eps = 1e-5;
    cplx fd = (m.eval(0, s + eps)[0] - m.eval(0, s - eps)[0]) / (2 * eps);
    CHECK(std::abs(m.eval(1, s)[0] - fd) < 1e-7);
    CHECK(std::abs(h.times_s().eval(0, s)[0] - s * h.eval(0, s)[0]) < 1e-14);
    CHECK(std::abs(h.times_s().eval(1, s)[0] - (h.eval(0, s)[0] + s * h.eval(1, s)[0])) < 1e-12);
    CHECK(std::abs(h.derivative().eval(2, s)[0] - h.eval(3, s)[0]) < 1e-12);
  }
  // composing modulations flattens to one shift term with the right phase
  SchwartzVector mm = m.modulate(-0.2, 0.5, 0.3);
  for (double s : linspace(-1, 1, 5)) {
    cplx expect = std::polar(1.0, kTwoPi * (0.3 - 0.2 * s)) * m.eval(0, s + 0.5)[0];
    CHECK(std::abs(mm.eval(0, s)[0] - expect) < 1e-13);
  }
}

TEST_CASE("hermite_fn normalisation and rescaling") {
  CHECK(hermite_fn(1.0, 0, 0.0) == doctest::Approx(std::pow(2.0, 0.25)));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ue(0.2, 3.0), ut(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    double e = ue(rng), t = ut(rng);
    for (int j : {0, 1, 4, 9}) {
      CHECK(std::abs(hermite_fn(e, j, t) - std::pow(e, 0.25) * hermite_fn(1.0, j, std::sqrt(e) * t)) < 1e-12);
      CHECK(std::abs(hermite_fn(e, j, t) - hermite_fn_oracle(e, j, t)) < 1e-11);
    }
  }
}
