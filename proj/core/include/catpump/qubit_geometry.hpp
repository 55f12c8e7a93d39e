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

#include <catpump/types.hpp>

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace catpump {

/// One harmonic of a periodic field: h(Φ) ⊃ c·e^{i(m1 φ1 + m2 φ2)}.
struct FourierTerm {
  int m1 = 0;
  int m2 = 0;
  std::array<cplx, 3> c{};
};

/// The qubit field Φ ↦ h(Φ). Built-in kinds carry analytic derivatives and
/// exact Fourier stencils; custom fields fall back to finite differences and
/// an FFT of a 64×64 sampling.
class TwoLevelField {
 public:
  enum class Kind { bhz, flat, custom };
  using Function = std::function<Vec3(double, double)>;

  /// h = Δ/2·(sin φ1, −sin φ2, 1 − cos φ1 − cos φ2).
  static TwoLevelField bhz(double gap);
  /// h = (0, 0, Δ/2), a topologically trivial reference.
  static TwoLevelField flat(double gap);
  static TwoLevelField custom(double gap, Function fn, std::string label = "custom");

  Kind kind() const { return kind_; }
  double gap() const { return gap_; }
  const std::string& label() const { return label_; }

  Vec3 at(const Phase2& phi) const;
  Vec3 derivative(const Phase2& phi, int axis) const;
  std::vector<FourierTerm> fourier() const;

 private:
  TwoLevelField(Kind kind, double gap, Function fn, std::string label);

  Kind kind_;
  double gap_;
  Function fn_;
  std::string label_;
};

/// Instantaneous eigensystem of h(Φ)·σ.
struct EigenSystem {
  double e_minus = 0.0;
  double e_plus = 0.0;
  Vec3 b_minus;
  Vec3 b_plus;
  Spinor v_minus;
  Spinor v_plus;

  double energy(Band b) const { return b == Band::minus ? e_minus : e_plus; }
  const Vec3& bloch(Band b) const { return b == Band::minus ? b_minus : b_plus; }
  const Spinor& vector(Band b) const { return b == Band::minus ? v_minus : v_plus; }
};

/// Normalized spinor with Bloch vector n in the fixed gauge: the larger
/// component is real and positive (the upper one on the equator).
Spinor spinor_from_bloch(const Vec3& n);

EigenSystem eigensystem_at(const TwoLevelField& model, const Phase2& phi);

struct DressedState {
  Band band = Band::minus;
  int order = 0;
  Phase2 phi;
  Spinor psi;
  double energy = 0.0;
  /// Norm of the order-1 correction before renormalization.
  double correction = 0.0;

  Vec3 bloch() const { return bloch_vector(psi); }
};

/// Order-0 eigenstate or order-1 adiabatic state. The order-1 correction is
/// the cross-band term π_μ X |ψ⁰_ν⟩/(E_μ − E_ν) with X = −i ω·∇π_ν, which is
/// gauge free; the result is renormalized.
DressedState dressed_state(const TwoLevelField& model, const Phase2& phi, const Frequencies& w,
                           Band band, int order);

/// Bloch vector of the dressed state and its phase derivatives.
struct BlochJet {
  Vec3 b;
  Vec3 d1;
  Vec3 d2;
};
BlochJet bloch_jet(const TwoLevelField& model, const Phase2& phi, const Frequencies& w, Band band,
                   int order);

/// Quantum metric g_ij = ¼ ∂ib·∂jb and node curvature from a Bloch jet.
std::array<double, 3> metric_from_jet(const BlochJet& j);
double curvature_from_jet(const BlochJet& j, Band band);

class GeometryMap {
 public:
  GeometryMap(int m1, int m2) : m1_(m1), m2_(m2) {}

  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int index(int i, int j) const;
  Phase2 point(int i, int j) const;
  double cell_area() const { return (kTwoPi / m1_) * (kTwoPi / m2_); }

  struct BandData {
    std::vector<double> energy;
    std::vector<Vec3> bloch;
    std::vector<double> curvature;          // node value
    std::vector<std::array<double, 3>> g;   // g11, g12, g22
    std::vector<double> plaquette_flux;     // Berry flux through the cell at (i, j), in (−π, π]
  };

  BandData& band(Band b) { return b == Band::minus ? minus_ : plus_; }
  const BandData& band(Band b) const { return b == Band::minus ? minus_ : plus_; }

  int order = 0;
  Frequencies omega;

 private:
  int m1_;
  int m2_;
  BandData minus_;
  BandData plus_;
};

/// Geometry of both bands on an M1×M2 torus grid. Curvature for the Chern
/// number comes from plaquette link phases; metric and node curvature from
/// Bloch-vector derivatives.
GeometryMap geometry_map(const TwoLevelField& model, const Frequencies& w, int order, int m1,
                         int m2);

/// Flux through each plaquette from the spinors on the grid, any gauge.
std::vector<double> plaquette_fluxes(const std::vector<Spinor>& states, int m1, int m2);

int chern_number(const GeometryMap& map, Band band);

/// Extrema of the bare dispersion: max E₋ and min E₊ on an M×M grid, refined
/// by a local golden-section search around the best grid point.
struct BandEdges {
  double minus_max = 0.0;
  double plus_min = 0.0;
  double minus_min = 0.0;
  double plus_max = 0.0;
};
BandEdges band_edges(const TwoLevelField& model, int grid = 128);

/// Phase acquired by the dressed state along Φ(t) = Φ0 − ω t: dynamical part
/// −∫E dt plus the transport part accumulated from overlap links between
/// consecutive gauge-fixed states. Result wrapped to (−π, π].
double transport_phase(const TwoLevelField& model, const Frequencies& w, Band band, int order,
                       const Phase2& phi0, double t, int steps = 20000);

void write_geometry_csv(std::ostream& out, const GeometryMap& map);

}  // namespace catpump
