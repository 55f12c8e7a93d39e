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
#include <catpump/types.hpp>

#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <vector>

namespace catpump {

using Site = std::array<int, 2>;

struct LatticeTruncation {
  int n1_min = -34;
  int n1_max = 34;
  int n2_min = -30;
  int n2_max = 30;
  double ne_max = 16.0;
  double nperp_max = 28.0;
  double nperp_center = 0.0;  // retained: |n_perp − nperp_center| ≤ nperp_max
  Frequencies omega;
};

/// Smallest (n1, n2) box holding the rotated window, with those bounds set.
LatticeTruncation rotated_window(const Frequencies& w, double ne_max, double nperp_max,
                                 double nperp_center = 0.0);

struct Rotated {
  double ne = 0.0;
  double nperp = 0.0;
};

Rotated rotated_coordinates(double n1, double n2, const Frequencies& w);
inline Rotated rotated_coordinates(const Site& s, const Frequencies& w) {
  return rotated_coordinates(s[0], s[1], w);
}

/// Retained sites in lexicographic (n1, n2) order. The basis of the total
/// Hilbert space is |site⟩⊗{↑,↓} with the spin as fast index.
class NumberLattice {
 public:
  explicit NumberLattice(const LatticeTruncation& trunc);

  const LatticeTruncation& truncation() const { return trunc_; }
  int size() const { return static_cast<int>(sites_.size()); }
  int dimension() const { return 2 * size(); }
  const Site& site(int k) const { return sites_[k]; }
  const std::vector<Site>& sites() const { return sites_; }

  /// Dense index of (n1, n2), or −1 when the site is not retained.
  int index(int n1, int n2) const;
  bool contains(int n1, int n2) const { return index(n1, n2) >= 0; }

  /// True for sites within two lattice steps of a dropped site.
  bool near_edge(int k) const { return edge_[k] != 0; }
  /// Minimal number of lattice steps from site k to the nearest dropped site.
  int edge_distance(int k) const { return dist_[k]; }

 private:
  LatticeTruncation trunc_;
  std::vector<Site> sites_;
  std::vector<int> lookup_;
  std::vector<char> edge_;
  std::vector<int> dist_;
};

NumberLattice build_lattice(const LatticeTruncation& trunc);

/// Complex Hermitian matrix in compressed row storage.
struct SparseHermitian {
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;
  Matrix m;

  int dimension() const { return static_cast<int>(m.rows()); }
  double max_abs() const;
  /// max |A − A†| over all entries.
  double hermiticity_defect() const;
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m); }
};

/// Ĥ_tot = ħω·N̂ + h(Φ̂)·σ on the truncated lattice; hops leaving it are dropped.
SparseHermitian assemble_total(const NumberLattice& lat, const TwoLevelField& model,
                               const Frequencies& w);
SparseHermitian assemble_zero_frequency(const NumberLattice& lat, const TwoLevelField& model);

/// Diagonal of ω·N̂ in the total basis (both spin copies).
Eigen::VectorXd number_energy_diagonal(const NumberLattice& lat, const Frequencies& w);

void write_matrix_dump(std::ostream& out, const SparseHermitian& h);

}  // namespace catpump
