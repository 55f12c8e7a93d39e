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

#include <catpump/eigensolver.hpp>
#include <catpump/rotor_lattice.hpp>
#include <catpump/states.hpp>

#include <iosfwd>
#include <memory>
#include <vector>

namespace catpump {

enum class Method { automatic, spectral, krylov };

struct PropagatorParams {
  Method method = Method::automatic;
  int spectral_cap = 8192;
  int krylov_dim = 30;
  double krylov_tol = 1e-9;
  /// Largest single Krylov step; zero means T₁/200 from the frequencies.
  double max_step = 0.0;
};

/// e^{−iĤt} for a fixed Ĥ, either from a full eigendecomposition or by
/// Lanczos steps with full reorthogonalization and an a-posteriori error
/// bound per step.
class Propagator {
 public:
  Propagator(std::shared_ptr<const SparseHermitian> h, const Frequencies& w,
             const PropagatorParams& p = {});

  Method method() const { return method_; }
  int dimension() const { return h_->dimension(); }
  const SparseHermitian& hamiltonian() const { return *h_; }
  const HermitianEigen* eigen() const { return eig_ ? eig_.get() : nullptr; }

  /// ψ ← e^{−iĤt}ψ.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const;
  /// Number of Lanczos steps taken so far (diagnostics).
  long krylov_steps() const { return steps_; }

 private:
  Eigen::VectorXcd krylov(Eigen::VectorXcd psi, double t) const;

  std::shared_ptr<const SparseHermitian> h_;
  Method method_;
  PropagatorParams params_;
  double max_step_;
  std::unique_ptr<HermitianEigen> eig_;
  mutable long steps_ = 0;
};

Propagator build_propagator(std::shared_ptr<const SparseHermitian> h, const Frequencies& w,
                            const PropagatorParams& p = {});

struct BoundaryPolicy {
  double warn = 1e-4;
  double abort = 1e-2;
};

/// Population within two lattice steps of the truncation edge.
double boundary_mass(const TotalState& s);

/// States at the requested times (physical units, nondecreasing, from 0).
std::vector<TotalState> evolve(const Propagator& prop, const TotalState& state,
                               const std::vector<double>& times, const BoundaryPolicy& policy = {});

/// P(n1, n2) per retained site.
std::vector<double> number_distribution(const TotalState& s);

struct ObservableRow {
  double t_over_T1 = 0.0;
  double n1 = 0.0, n2 = 0.0, ne = 0.0, nperp = 0.0;
  double dne = 0.0, dnperp = 0.0;
  Vec3 q = Vec3::Zero();
  double purity = 1.0;
  double norm = 0.0;
  double boundary = 0.0;
  /// Spread along n1, n2 (not exported in the series CSV).
  double dn1 = 0.0, dn2 = 0.0;
};

/// Moments normalized by ‖Ψ‖²; qubit state from the partial trace.
ObservableRow observables(const TotalState& s, const Frequencies& w, double t = 0.0);

/// ⟨Ψ|Ĥ|Ψ⟩/⟨Ψ|Ψ⟩.
double energy(const SparseHermitian& h, const Eigen::VectorXcd& psi);

void write_observable_csv(std::ostream& out, const std::vector<ObservableRow>& rows);

}  // namespace catpump
