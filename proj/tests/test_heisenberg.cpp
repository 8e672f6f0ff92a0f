#include <cmath>
#include <random>

#include "doctest.h"
#include "nct/heisenberg.hpp"

using namespace nct;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

double sup_distance(const SchwartzVector& a, const SchwartzVector& b, cplx scale = 1.0) {
  double worst = 0.0;
  for (double s : grid(-3, 3, 61)) {
    auto x = a.eval(0, s), y = b.eval(0, s);
    for (std::size_t c = 0; c < x.size(); ++c) worst = std::max(worst, std::abs(x[c] - scale * y[c]));
  }
  return worst;
}

SchwartzVector random_vector(const ModuleParams& P, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> co(4, std::vector<cplx>(P.d));
  for (auto& row : co)
    for (auto& c : row) c = cplx(g(rng), g(rng));
  return SchwartzVector::hermite_series(1.0, co);
}

// Plain formula for varpi, pointwise; used as an oracle for the node-based path.
std::vector<cplx> varpi_pointwise(const ModuleParams& P, int n, int m, const SchwartzVector& xi, double s) {
  const double e = P.eth();
  auto w = xi.eval(0, s + e * m);
  std::vector<cplx> out(P.d);
  for (int c = 0; c < P.d; ++c) {
    const int src = ((c - m) % P.d + P.d) % P.d;
    const double lam = -kTwoPi * P.p * double(c + 1) / P.q;
    const double ph = kPi * P.p * double(n) * m / P.q + kPi * e * n * m + kTwoPi * s * n + lam * n;
    out[c] = std::polar(1.0, ph) * w[src];
  }
  return out;
}

const ModuleParams kCases[] = {
    ModuleParams(0, 1, 1, 0.37),
    ModuleParams(1, 3, 3, 0.61),
    ModuleParams(1, 2, 4, 0.2),
};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModuleParams(1, 0, 1, 0.3), ParameterError);
  CHECK_THROWS_AS(ModuleParams(1, 2, 3, 0.3), ParameterError);
  CHECK_THROWS_AS(ModuleParams(1, 2, 2, 0.5), ParameterError);
  CHECK_THROWS_AS(ModuleParams(0, 1, 0, 0.5), ParameterError);
  CHECK_THROWS_AS(ModuleParams(0, 1, 1, NAN), ParameterError);
  CHECK(ModuleParams(2, 5, 10, 0.3).eth() == doctest::Approx(-0.1));
}

TEST_CASE("clock and shift") {
  for (const auto& P : kCases) {
    ClockShift cs = clock_shift(P);
    const cplx w = std::polar(1.0, kTwoPi * P.p / P.q);
    CHECK((cs.v * cs.u - w * cs.u * cs.v).norm() < 1e-13);
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(P.d, P.d);
    Eigen::MatrixXcd uq = I, vd = I;
    for (int i = 0; i < P.q; ++i) uq = uq * cs.u;
    for (int i = 0; i < P.d; ++i) vd = vd * cs.v;
    CHECK((uq - I).norm() < 1e-12);
    CHECK((vd - I).norm() < 1e-12);
    CHECK((cs.u.adjoint() * cs.u - I).norm() < 1e-13);
  }
  ModuleParams P(1, 2, 2, 0.3);
  ClockShift cs = clock_shift(P);
  CHECK(std::abs(cs.u(0, 0) - cplx(-1, 0)) < 1e-15);
  CHECK(std::abs(cs.u(1, 1) - cplx(1, 0)) < 1e-15);
  CHECK(cs.v(1, 0) == cplx(1.0));
  CHECK(cs.v(0, 1) == cplx(1.0));
}

TEST_CASE("varpi matches the pointwise formula") {
  std::mt19937_64 rng(11);
  for (const auto& P : kCases) {
    SchwartzVector xi = random_vector(P, rng);
    for (int n = -2; n <= 2; ++n)
      for (int m = -2; m <= 2; ++m) {
        SchwartzVector v = varpi_act(P, n, m, xi);
        for (double s : grid(-2, 2, 9)) {
          auto a = v.eval(0, s), b = varpi_pointwise(P, n, m, xi, s);
          for (int c = 0; c < P.d; ++c) CHECK(std::abs(a[c] - b[c]) < 1e-12);
        }
      }
  }
  CHECK_THROWS_AS(varpi_act(kCases[1], 1, 1, SchwartzVector::gaussian(1)), DimensionError);
}

TEST_CASE("varpi is a projective representation with the torus cocycle") {
  std::mt19937_64 rng(5);
  for (const auto& P : kCases) {
    SchwartzVector xi = random_vector(P, rng);
    for (int n1 = -2; n1 <= 2; ++n1)
      for (int m1 = -2; m1 <= 2; m1 += 2)
        for (int n2 = -1; n2 <= 2; ++n2)
          for (int m2 = -1; m2 <= 1; ++m2) {
            Site g{n1, m1}, h{n2, m2};
            SchwartzVector lhs = varpi_act(P, n1, m1, varpi_act(P, n2, m2, xi));
            SchwartzVector rhs = varpi_act(P, n1 + n2, m1 + m2, xi);
            CHECK(sup_distance(lhs, rhs, cocycle(P.theta, g, h)) < 1e-11);
          }
  }
}

TEST_CASE("weyl operators: cocycle, isometry, inverse") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  ModuleParams P(1, 3, 3, 0.61);
  const double e = P.eth();
  SchwartzVector xi = random_vector(P, rng);
  for (int i = 0; i < 20; ++i) {
    double x = u(rng), y = u(rng), z = u(rng), w = u(rng);
    SchwartzVector lhs = weyl_act(P, x, y, weyl_act(P, z, w, xi));
    cplx sig = std::polar(1.0, kPi * e * (z * y - x * w));
    CHECK(sup_distance(lhs, weyl_act(P, x + z, y + w, xi), sig) < 1e-11);
    CHECK(l2_norm(weyl_act(P, x, y, xi)) == doctest::Approx(l2_norm(xi)).epsilon(1e-10));
    CHECK(sup_distance(weyl_act(P, -x, -y, weyl_act(P, x, y, xi)), xi) < 1e-12);
  }
}

TEST_CASE("alpha group law and commutation phase") {
  // Composition of the translation-modulation operators gives
  // alpha^{x,y,u} alpha^{z,w,v} = alpha^{x+z, y+w, u+v+yz}, and hence the
  // commutation phase e^{2 pi i eth (yz - xw)}.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> r(-1.2, 1.2);
  ModuleParams P(1, 2, 4, 0.2);
  const double e = P.eth();
  SchwartzVector xi = random_vector(P, rng);
  for (int i = 0; i < 20; ++i) {
    double x = r(rng), y = r(rng), u = r(rng), z = r(rng), w = r(rng), v = r(rng);
    SchwartzVector ab = alpha_act(P, x, y, u, alpha_act(P, z, w, v, xi));
    SchwartzVector ba = alpha_act(P, z, w, v, alpha_act(P, x, y, u, xi));
    CHECK(sup_distance(ab, alpha_act(P, x + z, y + w, u + v + y * z, xi)) < 1e-11);
    CHECK(sup_distance(ab, ba, std::polar(1.0, kTwoPi * e * (y * z - x * w))) < 1e-11);
  }
}

TEST_CASE("left action is a module action") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (const auto& P : kCases) {
    TorusElement a(P.theta), b(P.theta);
    for (int i = 0; i < 4; ++i) {
      a.add(int(rng() % 5) - 2, int(rng() % 5) - 2, cplx(g(rng), g(rng)));
      b.add(int(rng() % 3) - 1, int(rng() % 3) - 1, cplx(g(rng), g(rng)));
    }
    SchwartzVector xi = random_vector(P, rng);
    SchwartzVector lhs = module_left_act(twisted_product(a, b), xi, P);
    SchwartzVector rhs = module_left_act(a, module_left_act(b, xi, P), P);
    CHECK(sup_distance(lhs, rhs) < 1e-10);
    CHECK(sup_distance(module_left_act(TorusElement::unit(P.theta), xi, P), xi) < 1e-14);
    CHECK(module_left_act(TorusElement(P.theta), xi, P).is_zero());
  }
  CHECK_THROWS_AS(module_left_act(TorusElement::unit(0.1), SchwartzVector::gaussian(), kCases[0]), ParameterError);
}

TEST_CASE("smearing") {
  ModuleParams P(0, 1, 1, 0.37);
  SchwartzVector xi = SchwartzVector::gaussian();
  CHECK(smearing_mass(zero_profile()) == 0.0);
  CHECK(smeared_weyl(P, zero_profile(), xi).is_zero());

  // a constant disc profile of radius R has mass pi R^2 c
  RadialProfile disc{[](double) { return 1.0; }, 0.3, true};
  Quad2D q;
  q.points_per_axis = 64;
  CHECK(smearing_mass(disc, q) == doctest::Approx(kPi * 0.09).epsilon(2e-2));

  RadialProfile heavy{[](double) { return 10.0; }, 1.0, true};
  CHECK_THROWS_AS(smeared_weyl(P, heavy, xi), ParameterError);
  RadialProfile negative{[](double) { return -0.1; }, 0.5, true};
  CHECK_THROWS_AS(smearing_mass(negative), ParameterError);

  // contraction: ||smeared|| <= mass * ||xi||, and a narrow profile is close to mass * xi
  RadialProfile b = bump_profile(0.02);
  double m = smearing_mass(b);
  RadialProfile nb = b.scaled(1.0 / m);
  SchwartzVector s = smeared_weyl(P, nb, xi);
  CHECK(l2_norm(s) <= l2_norm(xi) * (1 + 1e-10));
  CHECK(sup_distance(s, xi) < 0.05);
}
