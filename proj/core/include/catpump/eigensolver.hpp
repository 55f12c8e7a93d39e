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

#pragma once

#include <catpump/rotor_lattice.hpp>

#include <Eigen/Dense>

namespace catpump {

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
};

/// Full eigendecomposition (Householder tridiagonalization + implicit QL).
HermitianEigen hermitian_eigen(Eigen::MatrixXcd a);

/// Same, from a sparse matrix, refusing dimensions above `cap`. Residuals
/// ‖Hv − Ev‖ are checked against 1e−8·‖H‖_max.
HermitianEigen hermitian_eigen(const SparseHermitian& h, int cap = 8192);

}  // namespace catpump
