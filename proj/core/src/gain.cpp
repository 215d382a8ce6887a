/*
 Copyright 2026 The nlreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "nlreg/gain.hpp"

#include "nlreg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nlreg {

std::vector<Complex> default_poles(int d) {
  if (d < 1) throw ConfigError("default_poles: d must be positive");
  return std::vector<Complex>(d, Complex(-1.0, 0.0));
}

namespace {

// Multiplies the ascending coefficient vector by a monic factor.
void multiply(std::vector<double>& poly, const std::vector<double>& factor) {
  std::vector<double> out(poly.size() + factor.size() - 1, 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    for (std::size_t j = 0; j < factor.size(); ++j) out[i + j] += poly[i] * factor[j];
  }
  poly = std::move(out);
}

} // namespace

PolePlacement place_poles(std::span<const Complex> poles) {
  const int d = static_cast<int>(poles.size());
  if (d < 1) throw ConfigError("place_poles: at least one pole required");
  double scale = 1.0;
  for (const Complex& p : poles) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw ConfigError("place_poles: non-finite pole");
    }
    if (!(p.real() < 0.0)) throw ConfigError("place_poles: pole is not strictly stable");
    scale = std::max(scale, std::abs(p));
  }
  const double real_tol = 1e-14 * scale;
  const double pair_tol = 1e-9 * scale;

  std::vector<double> poly{1.0};
  std::vector<bool> used(d, false);
  for (int i = 0; i < d; ++i) {
    if (used[i]) continue;
    const Complex p = poles[i];
    used[i] = true;
    if (std::abs(p.imag()) <= real_tol) {
      multiply(poly, {-p.real(), 1.0});
      continue;
    }
    int partner = -1;
    for (int j = 0; j < d; ++j) {
      if (!used[j] && std::abs(poles[j] - std::conj(p)) <= pair_tol) {
        partner = j;
        break;
      }
    }
    if (partner < 0) throw ConfigError("place_poles: poles are not closed under conjugation");
    used[partner] = true;
    multiply(poly, {std::norm(p), -2.0 * p.real(), 1.0});
  }

  PolePlacement out;
  out.poles.assign(poles.begin(), poles.end());
  out.c.resize(d);
  out.g0.resize(d);
  for (int i = 0; i < d; ++i) {
    out.c[i] = poly[i];
    out.g0[i] = poly[d - 1 - i];
  }
  out.eigen_error = match_error(poles, precise_eigenvalues(observer_matrix(out.g0)));
  return out;
}

Mat shift_matrix(int d) {
  Mat a = Mat::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) a(i, i + 1) = 1.0;
  return a;
}

Mat observer_matrix(const Vec& g0) {
  Mat a = shift_matrix(static_cast<int>(g0.size()));
  a.col(0) -= g0;
  return a;
}

double match_error(std::span<const Complex> requested,
                   std::span<const Complex> computed) {
  const int d = static_cast<int>(requested.size());
  if (static_cast<int>(computed.size()) != d) {
    throw ConfigError("match_error: size mismatch");
  }
  if (d <= 8) {
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (int i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(requested[i] - computed[perm[i]]));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy for larger sets.
  std::vector<bool> taken(d, false);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    int arg = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
      if (!taken[j] && std::abs(requested[i] - computed[j]) < dist) {
        dist = std::abs(requested[i] - computed[j]);
        arg = j;
      }
    }
    taken[arg] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

namespace {

Mat lyapunov_operator(const Mat& p, const Mat& a) { return p * a + a.transpose() * p; }

// P A + A^T P + I accumulated in long double.
Mat residual_extended(const Mat& p, const Mat& a) {
  const int d = static_cast<int>(a.rows());
  Mat r(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      long double s = i == j ? 1.0L : 0.0L;
      for (int k = 0; k < d; ++k) {
        s += static_cast<long double>(p(i, k)) * a(k, j);
        s += static_cast<long double>(a(k, i)) * p(k, j);
      }
      r(i, j) = static_cast<double>(s);
    }
  }
  return r;
}

} // namespace

Mat solve_lyapunov(const Mat& a_cl) {
  const int d = static_cast<int>(a_cl.rows());
  if (d < 1 || a_cl.cols() != d) throw ConfigError("solve_lyapunov: matrix must be square");
  if (!a_cl.allFinite()) throw PreconditionError("solve_lyapunov: non-finite matrix");
  Eigen::EigenSolver<Mat> es(a_cl, false);
  if (es.info() != Eigen::Success || es.eigenvalues().real().maxCoeff() >= 0.0) {
    throw PreconditionError("solve_lyapunov: matrix is not Hurwitz");
  }

  // Unknowns are the upper triangle of P; the equations are the upper
  // triangle of P A + A^T P = -I.
  const int m = d * (d + 1) / 2;
  std::vector<std::pair<int, int>> index;
  index.reserve(m);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) index.emplace_back(i, j);
  }
  Mat op(m, m);
  for (int col = 0; col < m; ++col) {
    Mat e = Mat::Zero(d, d);
    e(index[col].first, index[col].second) = 1.0;
    e(index[col].second, index[col].first) = 1.0;
    const Mat le = lyapunov_operator(e, a_cl);
    for (int row = 0; row < m; ++row) op(row, col) = le(index[row].first, index[row].second);
  }
  const Eigen::FullPivLU<Mat> lu(op);
  if (!lu.isInvertible()) throw PreconditionError("solve_lyapunov: singular Lyapunov operator");

  auto unpack = [&](const Vec& u) {
    Mat p(d, d);
    for (int k = 0; k < m; ++k) {
      p(index[k].first, index[k].second) = u[k];
      p(index[k].second, index[k].first) = u[k];
    }
    return p;
  };
  Vec rhs(m);
  for (int k = 0; k < m; ++k) rhs[k] = index[k].first == index[k].second ? -1.0 : 0.0;
  Mat p = unpack(lu.solve(rhs));

  // Iterative refinement with the residual formed in extended precision.
  for (int iter = 0; iter < 3; ++iter) {
    const Mat r = residual_extended(p, a_cl);
    Vec rv(m);
    for (int k = 0; k < m; ++k) rv[k] = -r(index[k].first, index[k].second);
    p += unpack(lu.solve(rv));
  }

  const Eigen::LLT<Mat> llt(p);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("solve_lyapunov: solution is not positive definite");
  }
  return p;
}

double lyapunov_residual(const Mat& p, const Mat& a_cl) {
  return residual_extended(p, a_cl).norm();
}

Vec dilation(int d, double kappa) {
  Vec out(d);
  double power = 1.0;
  for (int i = 0; i < d; ++i) {
    power *= kappa;
    out[i] = power;
  }
  return out;
}

Vec build_gain(const Vec& g0, double kappa) {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) {
    throw ConfigError("build_gain: kappa must be a finite number greater than 1");
  }
  return dilation(static_cast<int>(g0.size()), kappa).cwiseProduct(g0);
}

double kappa_lower_bound(double lipschitz, const Mat& p) {
  if (!(lipschitz >= 0.0)) throw ConfigError("kappa_lower_bound: L must be nonnegative");
  const Eigen::SelfAdjointEigenSolver<Mat> es(p, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw PreconditionError("kappa_lower_bound: P must be positive definite");
  }
  return 2.0 * lipschitz * es.eigenvalues().maxCoeff();
}

GainDesign GainDesign::with_kappa(double new_kappa) const {
  GainDesign out = *this;
  out.g = build_gain(g0, new_kappa);
  out.kappa = new_kappa;
  return out;
}

GainDesign design_gains(std::span<const Complex> poles, double lipschitz,
                        double kappa) {
  const PolePlacement placement = place_poles(poles);
  GainDesign out;
  out.d = static_cast<int>(poles.size());
  out.poles = placement.poles;
  out.c = placement.c;
  out.g0 = placement.g0;
  out.eigen_error = placement.eigen_error;
  const Mat a_cl = observer_matrix(out.g0);
  out.p = solve_lyapunov(a_cl);
  out.lyapunov_residual = lyapunov_residual(out.p, a_cl);
  out.lipschitz = lipschitz;
  out.kappa_lb = kappa_lower_bound(lipschitz, out.p);
  out.kappa = kappa;
  out.g = build_gain(out.g0, kappa);
  return out;
}

} // namespace nlreg
