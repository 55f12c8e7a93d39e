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

#include <catpump/interpolation.hpp>
#include <catpump/qubit_geometry.hpp>
#include <catpump/states.hpp>

#include <iosfwd>
#include <vector>

namespace catpump {

/// Interpolated band geometry (energy, node curvature, metric) of one band.
class BandSplines {
 public:
  BandSplines(const GeometryMap& map, Band band);

  Band band() const { return band_; }
  const Frequencies& omega() const { return omega_; }
  int chern() const { return chern_; }

  PeriodicSpline2D::Jet energy(double p1, double p2) const { return e_.eval(p1, p2); }
  double curvature(double p1, double p2) const { return f_(p1, p2); }
  std::array<double, 3> metric(double p1, double p2) const {
    return {g11_(p1, p2), g12_(p1, p2), g22_(p1, p2)};
  }
  /// Interpolation grid; the fields are single polynomial patches between grid lines.
  int grid1() const { return e_.m1(); }
  int grid2() const { return e_.m2(); }
  /// (ṅ1, ṅ2) = (∂1E + ω2 F, ∂2E − ω1 F).
  std::array<double, 2> rate(double p1, double p2) const;

 private:
  Band band_;
  Frequencies omega_;
  int chern_;
  PeriodicSpline2D e_, f_, g11_, g12_, g22_;
};

struct ClassicalTrajectory {
  Band band = Band::minus;
  Phase2 phi0;
  std::vector<double> times;
  std::vector<double> n1, n2, ne, nperp;
};

/// Hybrid trajectory n_i(t, Φ0) along Φ(t) = Φ0 − ωt. The path is cut where
/// it crosses interpolation grid lines and into pieces no longer than
/// `max_step` (default T₁/400); 4-point Gauss-Legendre on each piece is exact
/// for the interpolated rates, whose restriction to a piece has degree ≤ 6.
ClassicalTrajectory classical_trajectory(const BandSplines& s, const Phase2& phi0,
                                         const std::vector<double>& times, double max_step = 0.0);
ClassicalTrajectory classical_trajectory(const GeometryMap& map, Band band, const Phase2& phi0,
                                         const std::vector<double>& times);

void write_trajectory_csv(std::ostream& out, const ClassicalTrajectory& tr, double period1);

/// Density-weighted mean and covariance of the trajectory displacements.
struct MomentPrediction {
  std::vector<double> times;
  std::vector<double> mean1, mean2;
  std::vector<double> var11, var12, var22;

  double mean_along(std::size_t k, double u1, double u2) const {
    return u1 * mean1[k] + u2 * mean2[k];
  }
  double var_along(std::size_t k, double u1, double u2) const {
    return u1 * u1 * var11[k] + 2 * u1 * u2 * var12[k] + u2 * u2 * var22[k];
  }
};

/// `density` lives on an M×M grid over [0, 2π)²; it need not be normalized.
MomentPrediction phase_averaged_moments(const BandSplines& s, const std::vector<double>& density,
                                        int m, const std::vector<double>& times);

struct SpreadingRow {
  double t = 0.0;
  double variance = 0.0;  // classical trajectory variance
  double metric = 0.0;    // metric difference term
  double correlation = 0.0;
  double spread = 0.0;    // predicted Δn_u(t)
};

/// Predicted spread of n_u = u1 n1 + u2 n2 for a band-projected state.
/// The initial moments and the current density are taken from the projected
/// state itself, so no gauge enters.
std::vector<SpreadingRow> spreading_prediction(const BandSplines& s, const TotalState& projected,
                                               const std::vector<double>& times, double u1,
                                               double u2, int grid = 0);

struct QuasiPeriod {
  long p1 = 0;
  long p2 = 0;
  double period = 0.0;          // p1·T₁
  double rephasing_error = 0.0;  // |Φ(T) − Φ0| on the torus
};
std::vector<QuasiPeriod> quasi_periods(double omega1, double omega2, long max_p1);
void write_quasi_periods_json(std::ostream& out, const std::vector<QuasiPeriod>& q);

struct AdiabaticTimescale {
  double epsilon = 0.0;
  double tau = 0.0;  // physical time
  double tau_over_T1 = 0.0;
};
/// ε = max_Φ |⟨ψ₊|dH/dt|ψ₋⟩|/(E₊ − E₋)² with dH/dt = −ω·∇H, and
/// τ = 0.1·exp(π/(4ε))·T₁.
AdiabaticTimescale adiabatic_timescale(const TwoLevelField& model, const Frequencies& w,
                                       int grid = 256);

struct PurityPrediction {
  std::vector<double> times;
  std::vector<double> purity;
  double average = 0.0;
  double bound = 1.0;  // 1 − |C|Δφ²/π with Δφ² the mean of the two widths squared
};
/// γ(t) = 1 − 2Δφ1² g11(Φ0 − ωt) − 2Δφ2² g22(Φ0 − ωt).
PurityPrediction purity_prediction(const BandSplines& s, const Phase2& phi0, double dphi1,
                                   double dphi2, const std::vector<double>& times);

}  // namespace catpump
