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

#include <catpump/qubit_geometry.hpp>
#include <catpump/rotor_lattice.hpp>

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace catpump {

/// Amplitudes c_n of one rotor mode for n = n_min, n_min + 1, ...
struct ModeWavefunction {
  int n_min = 0;
  std::vector<cplx> amp;
  int n0 = 0;
  double dn = 0.0;
  double phi0 = 0.0;

  int n_max() const { return n_min + static_cast<int>(amp.size()) - 1; }
  cplx at(int n) const;
  double mean_number() const;
  double number_std() const;
  /// ⟨e^{iφ̂}⟩ = Σ conj(c_n) c_{n+1}.
  cplx phase_moment() const;
  /// √(−2 ln|⟨e^{iφ̂}⟩|), the circular spread on the circle.
  double circular_phase_spread() const;
};

/// c_n ∝ exp(−(n−n0)²/(4Δn²))·e^{i n φ0}; localized at φ0 in phase with
/// width 1/(2Δn).
ModeWavefunction gaussian_mode(int n0, double dn, double phi0 = 0.0);
ModeWavefunction fock_mode(int n0);
/// Gaussian with Δn = 1/(2π), the nearly phase-delocalized preset.
ModeWavefunction quasi_fock_mode(int n0);

struct QubitState {
  Spinor amp;
  Vec3 bloch() const { return bloch_vector(amp); }
  double purity() const {
    const Vec3 b = bloch();
    return 0.5 * (1.0 + b.squaredNorm());
  }
};

/// (cos θ/2, e^{iφ} sin θ/2); θ = 0 is |↑⟩.
QubitState qubit_state(double theta, double phi = 0.0);

struct TotalState {
  std::shared_ptr<const NumberLattice> lattice;
  Eigen::VectorXcd amp;
  double mass_loss = 0.0;

  cplx up(int site) const { return amp(2 * site); }
  cplx down(int site) const { return amp(2 * site + 1); }
  double norm2() const { return amp.squaredNorm(); }
};

TotalState separable_state(const ModeWavefunction& m1, const ModeWavefunction& m2,
                           const QubitState& q, std::shared_ptr<const NumberLattice> lattice);

/// Band resolution request for a phase map.
struct BandResolution {
  const TwoLevelField* model = nullptr;
  Frequencies omega;
  Band band = Band::minus;
  int order = 0;
};

/// χ_s on an M×M grid over [0, 2π)², with ⟨Φ|N⟩ = e^{−i N·Φ}/(2π). When a
/// band is requested, `band` holds χ_ν = Σ_s conj(ψ_ν(Φ)_s) χ_s.
struct PhaseAmplitudeMap {
  int m = 0;
  std::vector<cplx> up;
  std::vector<cplx> down;
  std::vector<cplx> band;

  int index(int i, int j) const { return i * m + j; }
  double cell() const { return (kTwoPi / m) * (kTwoPi / m); }
  double density(int k) const { return std::norm(up[k]) + std::norm(down[k]); }
  double band_density(int k) const { return std::norm(band[k]); }
  double total_weight() const;
  double band_weight() const;
};

/// Smallest FFT size ≥ n with prime factors 2, 3, 5 only.
int fft_size_at_least(int n);
/// Version string of the FFT backend.
const char* fft_library_version();

/// Number ↔ phase transform of both spin components on a fixed M×M grid.
/// M must cover the lattice's box width so the round trip is exact.
class PhaseTransform {
 public:
  PhaseTransform(std::shared_ptr<const NumberLattice> lattice, int m);
  ~PhaseTransform();
  PhaseTransform(const PhaseTransform&) = delete;
  PhaseTransform& operator=(const PhaseTransform&) = delete;

  int m() const { return m_; }
  /// Fills up/down with χ_s(Φ_ij).
  void to_phase(const Eigen::VectorXcd& amp, std::vector<cplx>& up, std::vector<cplx>& down);
  /// Inverse transform, gathered on the retained sites (mass elsewhere is dropped).
  Eigen::VectorXcd to_number(const std::vector<cplx>& up, const std::vector<cplx>& down);

 private:
  std::shared_ptr<const NumberLattice> lat_;
  int m_;
  cplx* buf_;
  void* fwd_;
  void* bwd_;
  std::vector<int> slot_;
};

PhaseAmplitudeMap phase_amplitude(const TotalState& state, int m,
                                  const std::optional<BandResolution>& band = std::nullopt);

void write_state_csv(std::ostream& out, const TotalState& state);
void write_phase_map_csv(std::ostream& out, const PhaseAmplitudeMap& map, bool density_only);

}  // namespace catpump
