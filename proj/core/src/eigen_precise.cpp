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
// Kept in its own translation unit: the multiprecision instantiation of the
// eigensolver is slow to compile.
#include "nlreg/errors.hpp"
#include "nlreg/gain.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Eigenvalues>

namespace nlreg {

std::vector<Complex> precise_eigenvalues(const Mat& a) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  using MatMp = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) throw ConfigError("precise_eigenvalues: matrix must be square");
  const MatMp m = a.cast<Real>();
  Eigen::EigenSolver<MatMp> es(m, false);
  if (es.info() != Eigen::Success) {
    throw PreconditionError("precise_eigenvalues: eigensolver did not converge");
  }
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const auto& v = es.eigenvalues()[i];
    out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return out;
}

} // namespace nlreg
