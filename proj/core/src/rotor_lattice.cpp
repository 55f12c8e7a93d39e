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

#include <catpump/errors.hpp>
#include <catpump/io.hpp>
#include <catpump/rotor_lattice.hpp>

#include <algorithm>
#include <deque>
#include <ostream>

namespace catpump {

Rotated rotated_coordinates(double n1, double n2, const Frequencies& w) {
  const double r = w.norm();
  if (!(r > 0.0)) throw ConfigError("rotated coordinates need a nonzero frequency vector");
  return {(w.omega1 * n1 + w.omega2 * n2) / r, (-w.omega2 * n1 + w.omega1 * n2) / r};
}

LatticeTruncation rotated_window(const Frequencies& w, double ne_max, double nperp_max,
                                 double nperp_center) {
  const double r = w.norm();
  if (!(r > 0.0)) throw ConfigError("rotated coordinates need a nonzero frequency vector");
  LatticeTruncation t;
  t.omega = w;
  t.ne_max = ne_max;
  t.nperp_max = nperp_max;
  t.nperp_center = nperp_center;
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (double e : {-ne_max, ne_max}) {
    for (double p : {nperp_center - nperp_max, nperp_center + nperp_max}) {
      const double n1 = (w.omega1 * e - w.omega2 * p) / r;
      const double n2 = (w.omega2 * e + w.omega1 * p) / r;
      lo1 = std::min(lo1, n1);
      hi1 = std::max(hi1, n1);
      lo2 = std::min(lo2, n2);
      hi2 = std::max(hi2, n2);
    }
  }
  t.n1_min = static_cast<int>(std::floor(lo1));
  t.n1_max = static_cast<int>(std::ceil(hi1));
  t.n2_min = static_cast<int>(std::floor(lo2));
  t.n2_max = static_cast<int>(std::ceil(hi2));
  return t;
}

NumberLattice::NumberLattice(const LatticeTruncation& t) : trunc_(t) {
  if (t.n1_min > t.n1_max || t.n2_min > t.n2_max) throw EmptyLattice("inverted box bounds");
  if (!(t.ne_max > 0.0) || !(t.nperp_max > 0.0)) throw EmptyLattice("rotated bounds must be positive");
  const int w1 = t.n1_max - t.n1_min + 1;
  const int w2 = t.n2_max - t.n2_min + 1;
  lookup_.assign(std::size_t(w1) * w2, -1);
  for (int a = t.n1_min; a <= t.n1_max; ++a) {
    for (int b = t.n2_min; b <= t.n2_max; ++b) {
      const Rotated r = rotated_coordinates(a, b, t.omega);
      if (std::abs(r.ne) <= t.ne_max && std::abs(r.nperp - t.nperp_center) <= t.nperp_max) {
        lookup_[std::size_t(a - t.n1_min) * w2 + (b - t.n2_min)] = size();
        sites_.push_back({a, b});
      }
    }
  }
  if (sites_.empty()) throw EmptyLattice("no site satisfies the truncation");

  // Breadth-first distance from the dropped region, measured in nearest-neighbour steps.
  const int s = size();
  dist_.assign(s, -1);
  std::deque<int> queue;
  for (int k = 0; k < s; ++k) {
    const auto [a, b] = sites_[k];
    if (!contains(a + 1, b) || !contains(a - 1, b) || !contains(a, b + 1) || !contains(a, b - 1)) {
      dist_[k] = 1;
      queue.push_back(k);
    }
  }
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    const auto [a, b] = sites_[k];
    for (auto [da, db] : {Site{1, 0}, Site{-1, 0}, Site{0, 1}, Site{0, -1}}) {
      const int q = index(a + da, b + db);
      if (q >= 0 && dist_[q] < 0) {
        dist_[q] = dist_[k] + 1;
        queue.push_back(q);
      }
    }
  }
  edge_.resize(s);
  for (int k = 0; k < s; ++k) edge_[k] = dist_[k] <= 2;
}

int NumberLattice::index(int n1, int n2) const {
  const auto& t = trunc_;
  if (n1 < t.n1_min || n1 > t.n1_max || n2 < t.n2_min || n2 > t.n2_max) return -1;
  return lookup_[std::size_t(n1 - t.n1_min) * (t.n2_max - t.n2_min + 1) + (n2 - t.n2_min)];
}

NumberLattice build_lattice(const LatticeTruncation& trunc) { return NumberLattice(trunc); }

double SparseHermitian::max_abs() const {
  double r = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Matrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

double SparseHermitian::hermiticity_defect() const {
  const Matrix d = m - Matrix(m.adjoint());
  double r = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Matrix::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

Eigen::VectorXd number_energy_diagonal(const NumberLattice& lat, const Frequencies& w) {
  Eigen::VectorXd d(lat.dimension());
  for (int k = 0; k < lat.size(); ++k) {
    const auto [a, b] = lat.site(k);
    d(2 * k) = d(2 * k + 1) = w.omega1 * a + w.omega2 * b;
  }
  return d;
}

SparseHermitian assemble_total(const NumberLattice& lat, const TwoLevelField& model,
                               const Frequencies& w) {
  const std::vector<FourierTerm> terms = model.fourier();
  std::vector<Eigen::Triplet<cplx, int>> trip;
  trip.reserve(std::size_t(lat.size()) * (terms.size() * 4 + 2));
  const cplx I(0.0, 1.0);
  for (int k = 0; k < lat.size(); ++k) {
    const auto [a, b] = lat.site(k);
    const double diag = w.omega1 * a + w.omega2 * b;
    if (diag != 0.0) {
      trip.emplace_back(2 * k, 2 * k, diag);
      trip.emplace_back(2 * k + 1, 2 * k + 1, diag);
    }
    // e^{i m·Φ̂}|N⟩ = |N − m⟩: column N, row N − m.
    for (const FourierTerm& t : terms) {
      const int r = lat.index(a - t.m1, b - t.m2);
      if (r < 0) continue;
      const auto& c = t.c;
      const cplx blk[2][2] = {{c[2], c[0] - I * c[1]}, {c[0] + I * c[1], -c[2]}};
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u)
          if (blk[s][u] != 0.0) trip.emplace_back(2 * r + s, 2 * k + u, blk[s][u]);
    }
  }
  SparseHermitian h;
  h.m.resize(lat.dimension(), lat.dimension());
  h.m.setFromTriplets(trip.begin(), trip.end());
  h.m.makeCompressed();
  const double scale = std::max(h.max_abs(), 1e-300);
  if (h.hermiticity_defect() > 1e-14 * scale)
    throw NonHermitianAssembly("assembled Hamiltonian is not Hermitian");
  return h;
}

SparseHermitian assemble_zero_frequency(const NumberLattice& lat, const TwoLevelField& model) {
  return assemble_total(lat, model, Frequencies{0.0, 0.0});
}

void write_matrix_dump(std::ostream& out, const SparseHermitian& h) {
  out << h.dimension() << '\n';
  for (int k = 0; k < h.m.outerSize(); ++k)
    for (SparseHermitian::Matrix::InnerIterator it(h.m, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << fmt(it.value().real()) << ' '
          << fmt(it.value().imag()) << '\n';
}

}  // namespace catpump
