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
#ifndef NLREG_GAIN_HPP
#define NLREG_GAIN_HPP

#include "nlreg/types.hpp"

#include <complex>
#include <span>
#include <vector>

namespace nlreg {

using Complex = std::complex<double>;

struct PolePlacement {
  std::vector<Complex> poles;
  Vec c;  ///< c_0, ..., c_{d-1} of p(lambda) = lambda^d + c_{d-1} lambda^{d-1} + ... + c_0
  Vec g0; ///< (c_{d-1}, ..., c_0), so that char(A - G0 Gamma) = p
  /// Largest distance between a requested pole and the matched eigenvalue of
  /// A - G0 Gamma, computed in extended precision.
  double eigen_error = 0.0;
};

/// All poles at -1.
std::vector<Complex> default_poles(int d);

/// Throws ConfigError for unstable or non-conjugate-closed pole sets.
PolePlacement place_poles(std::span<const Complex> poles);

/// Up-shift matrix: ones on the first superdiagonal.
Mat shift_matrix(int d);
/// A - g0 e_1^T.
Mat observer_matrix(const Vec& g0);

/// Eigenvalues computed in 50-digit arithmetic from the double matrix.
std::vector<Complex> precise_eigenvalues(const Mat& a);

/// Max over requested poles of the distance to their matched eigenvalue,
/// using an optimal one-to-one matching.
double match_error(std::span<const Complex> requested,
                   std::span<const Complex> computed);

/// Solves P A + A^T P = -I. Throws PreconditionError when A is not Hurwitz.
Mat solve_lyapunov(const Mat& a_cl);
/// Frobenius norm of P A + A^T P + I.
double lyapunov_residual(const Mat& p, const Mat& a_cl);

/// (kappa, kappa^2, ..., kappa^d).
Vec dilation(int d, double kappa);
/// D_kappa g0. Throws ConfigError unless kappa > 1.
Vec build_gain(const Vec& g0, double kappa);

/// 2 L ||P||_2.
double kappa_lower_bound(double lipschitz, const Mat& p);

struct GainDesign {
  int d = 0;
  std::vector<Complex> poles;
  Vec c;
  Vec g0;
  double kappa = 0.0;
  Vec g;
  Mat p;
  double lipschitz = 0.0;
  double kappa_lb = 0.0;
  double eigen_error = 0.0;
  double lyapunov_residual = 0.0;

  /// Same G0 and P, new dilation.
  GainDesign with_kappa(double kappa) const;
};

GainDesign design_gains(std::span<const Complex> poles, double lipschitz,
                        double kappa);

} // namespace nlreg

#endif // NLREG_GAIN_HPP
