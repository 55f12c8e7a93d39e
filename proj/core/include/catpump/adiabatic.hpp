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
#include <catpump/propagation.hpp>
#include <catpump/qubit_geometry.hpp>
#include <catpump/states.hpp>

#include <iosfwd>
#include <memory>
#include <vector>

namespace catpump {

/// Band projector applied to number-basis vectors.
class Projector {
 public:
  virtual ~Projector() = default;
  virtual Band band() const = 0;
  virtual int order() const = 0;
  virtual Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const = 0;
};

struct BandCuts {
  double minus = -1.0;  // states below belong to the ground band
  double plus = 1.0;    // states above belong to the excited band
};
BandCuts band_cuts(const TwoLevelField& model, int grid = 128);

/// Spectral construction in the eigenbasis of the zero-frequency lattice
/// Hamiltonian. In-gap (edge) eigenstates belong to neither band. The order-1
/// part couples the two bands through ω·N̂ divided by the level spacing.
class LatticeProjector final : public Projector {
 public:
  LatticeProjector(std::shared_ptr<const HermitianEigen> h0, std::shared_ptr<const NumberLattice> lat,
                   const Frequencies& w, const BandCuts& cuts, double gap, Band band, int order);

  Band band() const override { return band_; }
  int order() const override { return order_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const override;

  int ground_count() const { return static_cast<int>(ground_.size()); }
  int excited_count() const { return static_cast<int>(excited_.size()); }
  int edge_count() const { return static_cast<int>(edge_.size()); }
  /// Mass of psi on the in-gap eigenstates.
  double edge_weight(const Eigen::VectorXcd& psi) const;
  /// Full matrix, for residual diagnostics on small lattices.
  Eigen::MatrixXcd dense() const;
  /// Projector onto the in-gap eigenstates.
  Eigen::MatrixXcd edge_projector() const;

 private:
  std::shared_ptr<const HermitianEigen> h0_;
  Band band_;
  int order_;
  std::vector<int> ground_, excited_, edge_;
  Eigen::MatrixXcd vin_, vout_;
  Eigen::MatrixXcd cross_;  // (out × in) order-1 block
};

struct ProjectorResiduals {
  double idempotence = 0.0;  // ‖Q(P² − P)Q‖₂
  double commutator = 0.0;   // ‖Q[Ĥ_tot, P]Q‖₂
};
/// Spectral norms of the defects, compressed by Q = 1 − P_edge and restricted
/// to sites more than `depth` steps from the truncation boundary. In-gap
/// states belong to neither band, so their coupling to the bulk through ω·N̂
/// is not a defect of the band projector.
ProjectorResiduals projector_residuals(const LatticeProjector& p, const SparseHermitian& h_tot,
                                       const NumberLattice& lat, int depth);

/// Pointwise construction in phase space: the state is transformed to an
/// M×M phase grid, multiplied by the 2×2 projector π₀(Φ) + π₁(Φ), and
/// transformed back onto the retained sites. Exact for the unbounded lattice
/// up to the order of the expansion; usable on lattices too large to diagonalize.
class PhaseSpaceProjector final : public Projector {
 public:
  PhaseSpaceProjector(std::shared_ptr<const NumberLattice> lat, const TwoLevelField& model,
                      const Frequencies& w, Band band, int order, int grid = 0);

  Band band() const override { return band_; }
  int order() const override { return order_; }
  int grid() const { return transform_->m(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const override;

 private:
  Band band_;
  int order_;
  std::unique_ptr<PhaseTransform> transform_;
  std::vector<Mat2> pi_;
};

/// π₀ + π₁ at one phase point (Hermitian 2×2).
Mat2 adiabatic_projector_2x2(const TwoLevelField& model, const Phase2& phi, const Frequencies& w,
                             Band band, int order);

struct Projection {
  TotalState state;
  double weight = 0.0;
};
Projection project(const TotalState& s, const Projector& p);

struct HalfspaceSplit {
  TotalState below;
  TotalState above;
  double weight_below = 0.0;
};
HalfspaceSplit halfspace_split(const TotalState& s, const Frequencies& w, double nperp_ref);

/// |⟨a|b⟩|²/(⟨a|a⟩⟨b|b⟩).
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Marginal of |Ψ|² over n_perp in unit bins, normalized; bins start at `origin`.
std::vector<double> nperp_marginal(const TotalState& s, const Frequencies& w, double origin,
                                   int bins);
double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q);

/// Max over times of |W(t) − W(0)| under exact evolution.
double weight_conservation_probe(const TotalState& s, const Projector& p, const Propagator& prop,
                                 const std::vector<double>& times);

/// W_ν = (1 + b̄·Q)/2 with b̄ the density-weighted average Bloch vector.
double predicted_weight(const std::vector<double>& density, double cell,
                        const std::vector<Vec3>& bloch, const Vec3& q);

/// 1 − Δφ1²g11 − Δφ2²g22.
double weight_metric_approx(double dphi1, double dphi2, const std::array<double, 3>& g);

struct CatSplitReport {
  double t_sep_over_T1 = 0.0;
  bool t_sep_detected = false;
  double w_minus = 0.0;
  double w_plus = 0.0;
  double w_edge = 0.0;
  double slope_minus = 0.0;
  double slope_plus = 0.0;
  double slope_theory = 0.0;
};
void write_cat_report_json(std::ostream& out, const CatSplitReport& r);

/// First sampled time at which the n_perp marginals of the two band
/// components overlap below `threshold` (Bhattacharyya coefficient); −1 if never.
double detect_separation(const std::vector<double>& times, const std::vector<TotalState>& minus,
                         const std::vector<TotalState>& plus, const Frequencies& w,
                         double threshold = 1e-3);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace catpump
