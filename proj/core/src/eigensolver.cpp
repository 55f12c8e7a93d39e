/* Copyright 2026 The catpump Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catpump/eigensolver.hpp>
#include <catpump/errors.hpp>

#include <Eigen/Eigenvalues>

#include <string>

namespace catpump {

HermitianEigen hermitian_eigen(Eigen::MatrixXcd a) {
  HermitianEigen r;
  if (a.rows() == 0) return r;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success) throw EigensolverFailure("Hermitian eigensolver did not converge");
  r.values = es.eigenvalues();
  r.vectors = es.eigenvectors();
  return r;
}

HermitianEigen hermitian_eigen(const SparseHermitian& h, int cap) {
  if (h.dimension() > cap)
    throw DimensionTooLarge("dimension " + std::to_string(h.dimension()) +
                            " exceeds the dense eigensolver cap " + std::to_string(cap));
  HermitianEigen r = hermitian_eigen(h.dense());
  const double tol = 1e-8 * std::max(h.max_abs(), 1e-300);
  const Eigen::MatrixXcd hv = h.m * r.vectors;
  for (int k = 0; k < h.dimension(); ++k) {
    const double res = (hv.col(k) - r.values(k) * r.vectors.col(k)).norm();
    if (res > tol) throw EigensolverFailure("eigenpair residual above tolerance");
  }
  return r;
}

}  // namespace catpump
