#include "nct/lanczos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace nct {
namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<cplx> default_start(int dim) {
  std::mt19937_64 rng(0x5eed1234ULL);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(dim);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

}  // namespace

RitzEstimate lanczos_hermitian(const LinearMap& op, int dim,
                               const std::vector<cplx>* start,
                               const LanczosOptions& opts) {
  RitzEstimate out;
  if (dim <= 0) return out;

  std::vector<cplx> q0 = (start && static_cast<int>(start->size()) == dim)
                             ? *start
                             : default_start(dim);
  // A warm start that is an exact eigenvector would stall the Krylov space.
  if (start && static_cast<int>(start->size()) == dim) {
    auto noise = default_start(dim);
    double s = norm2(q0);
    for (int i = 0; i < dim; ++i) q0[i] += 1e-3 * s / std::sqrt(double(dim)) * noise[i];
  }
  double n0 = norm2(q0);
  if (n0 == 0.0) return out;
  for (auto& z : q0) z /= n0;

  const int kmax = std::min(opts.max_steps, dim);
  std::vector<std::vector<cplx>> Q;
  Q.reserve(kmax + 1);
  Q.push_back(std::move(q0));
  std::vector<double> alpha, beta;
  std::vector<cplx> w(dim);

  double prev = -1.0;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;

  auto solve_tridiag = [&](int k) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
  };

  int k = 0;
  for (; k < kmax; ++k) {
    op(Q[k].data(), w.data());
    double a = dot(Q[k], w).real();
    alpha.push_back(a);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        cplx c = dot(Q[j], w);
        for (int i = 0; i < dim; ++i) w[i] -= c * Q[j][i];
      }
    }
    double b = norm2(w);
    bool last = (k + 1 == kmax);
    bool breakdown = b < 1e-13 * std::max(1.0, std::abs(a));
    if ((k + 1) % opts.check_every == 0 || last || breakdown) {
      solve_tridiag(k + 1);
      double cur = std::max(std::abs(evals(0)), std::abs(evals(k)));
      if (breakdown || last ||
          (prev >= 0.0 && std::abs(cur - prev) <= opts.rel_tol * std::max(cur, 1e-300))) {
        ++k;
        break;
      }
      prev = cur;
    }
    beta.push_back(b);
    std::vector<cplx> next(dim);
    for (int i = 0; i < dim; ++i) next[i] = w[i] / b;
    Q.push_back(std::move(next));
  }

  const int m = static_cast<int>(alpha.size());
  if (evals.size() != m) solve_tridiag(m);
  int idx = std::abs(evals(m - 1)) >= std::abs(evals(0)) ? m - 1 : 0;
  out.value = std::abs(evals(idx));
  out.min_value = evals(0);
  out.steps = m;
  out.vector.assign(dim, cplx(0.0));
  for (int j = 0; j < m; ++j) {
    double c = evecs(j, idx);
    for (int i = 0; i < dim; ++i) out.vector[i] += c * Q[j][i];
  }
  return out;
}

RitzEstimate lanczos_top_singular(const LinearMap& op, const LinearMap& adjoint,
                                  int dim, const std::vector<cplx>* start,
                                  const LanczosOptions& opts) {
  std::vector<cplx> tmp(dim);
  LinearMap gram = [&](const cplx* x, cplx* y) {
    op(x, tmp.data());
    adjoint(tmp.data(), y);
  };
  RitzEstimate r = lanczos_hermitian(gram, dim, start, opts);
  r.value = std::sqrt(std::max(0.0, r.value));
  r.min_value = std::sqrt(std::max(0.0, r.min_value));
  return r;
}

}  // namespace nct
