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

#include <catpump/adiabatic.hpp>
#include <catpump/errors.hpp>
#include <catpump/io.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace catpump {

BandCuts band_cuts(const TwoLevelField& model, int grid) {
  const BandEdges e = band_edges(model, grid);
  return {e.minus_max, e.plus_min};
}

LatticeProjector::LatticeProjector(std::shared_ptr<const HermitianEigen> h0,
                                   std::shared_ptr<const NumberLattice> lat, const Frequencies& w,
                                   const BandCuts& cuts, double gap, Band band, int order)
    : h0_(std::move(h0)), band_(band), order_(order) {
  if (order != 0 && order != 1) throw ConfigError("projectors exist at order 0 or 1 only");
  const Eigen::VectorXd& e = h0_->values;
  if (e.size() != lat->dimension()) throw ConfigError("eigensystem does not match the lattice");
  for (int k = 0; k < e.size(); ++k) {
    if (std::abs(e(k) - cuts.minus) < 1e-6 * gap || std::abs(e(k) - cuts.plus) < 1e-6 * gap)
      throw DegenerateCut("eigenvalue " + fmt(e(k)) + " sits on a band cut");
    if (e(k) < cuts.minus)
      ground_.push_back(k);
    else if (e(k) > cuts.plus)
      excited_.push_back(k);
    else
      edge_.push_back(k);
  }
  const auto& in = band == Band::minus ? ground_ : excited_;
  const auto& out = band == Band::minus ? excited_ : ground_;
  const Eigen::MatrixXcd& v = h0_->vectors;
  vin_.resize(v.rows(), in.size());
  for (std::size_t c = 0; c < in.size(); ++c) vin_.col(c) = v.col(in[c]);
  if (order == 1) {
    vout_.resize(v.rows(), out.size());
    for (std::size_t c = 0; c < out.size(); ++c) vout_.col(c) = v.col(out[c]);
    const Eigen::VectorXd d = number_energy_diagonal(*lat, w);
    cross_ = vout_.adjoint() * (d.asDiagonal() * vin_);
    for (Eigen::Index k = 0; k < cross_.rows(); ++k)
      for (Eigen::Index l = 0; l < cross_.cols(); ++l) cross_(k, l) /= e(in[l]) - e(out[k]);
  }
}

Eigen::VectorXcd LatticeProjector::apply(const Eigen::VectorXcd& psi) const {
  const Eigen::VectorXcd a = vin_.adjoint() * psi;
  if (order_ == 0) return vin_ * a;
  const Eigen::VectorXcd b = vout_.adjoint() * psi;
  return vin_ * (a + cross_.adjoint() * b) + vout_ * (cross_ * a);
}

double LatticeProjector::edge_weight(const Eigen::VectorXcd& psi) const {
  double s = 0.0;
  for (int k : edge_) s += std::norm(h0_->vectors.col(k).dot(psi));
  return s;
}

Eigen::MatrixXcd LatticeProjector::dense() const {
  Eigen::MatrixXcd p = vin_ * vin_.adjoint();
  if (order_ == 1) {
    const Eigen::MatrixXcd x = vout_ * cross_ * vin_.adjoint();
    p += x + x.adjoint();
  }
  return p;
}

Eigen::MatrixXcd LatticeProjector::edge_projector() const {
  const Eigen::MatrixXcd& v = h0_->vectors;
  Eigen::MatrixXcd e(v.rows(), edge_.size());
  for (std::size_t c = 0; c < edge_.size(); ++c) e.col(c) = v.col(edge_[c]);
  return e * e.adjoint();
}

namespace {

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

ProjectorResiduals projector_residuals(const LatticeProjector& p, const SparseHermitian& h_tot,
                                       const NumberLattice& lat, int depth) {
  const Eigen::MatrixXcd pm = p.dense();
  const Eigen::MatrixXcd h = h_tot.dense();
  const Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(pm.rows(), pm.cols()) - p.edge_projector();
  std::vector<int> keep;
  for (int k = 0; k < lat.size(); ++k) {
    if (lat.edge_distance(k) > depth) {
      keep.push_back(2 * k);
      keep.push_back(2 * k + 1);
    }
  }
  if (keep.empty()) throw ConfigError("no site lies deeper than the requested depth");
  const auto restricted = [&](const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd b = q * a * q;
    Eigen::MatrixXcd r(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) r(i, j) = b(keep[i], keep[j]);
    return r;
  };
  return {spectral_norm(restricted(pm * pm - pm)), spectral_norm(restricted(h * pm - pm * h))};
}

Mat2 adiabatic_projector_2x2(const TwoLevelField& model, const Phase2& phi, const Frequencies& w,
                             Band band, int order) {
  const EigenSystem es = eigensystem_at(model, phi);
  const Spinor& vn = es.vector(band);
  Mat2 p = vn * vn.adjoint();
  if (order == 0) return p;
  const Band mu = other(band);
  const Vec3 h = model.at(phi);
  const double r = h.norm();
  const Vec3 hh = h / r;
  Vec3 v = Vec3::Zero();
  for (int i = 0; i < 2; ++i) {
    const Vec3 dh = model.derivative(phi, i);
    v += w[i] * (dh - hh * hh.dot(dh)) / r;
  }
  const Mat2 x = cplx(0.0, -0.5 * sign(band)) * dot_sigma(v);
  const Spinor& vm = es.vector(mu);
  const Mat2 a = vm * (vm.adjoint() * x * vn) * vn.adjoint();
  p += (a + a.adjoint()) / (es.energy(mu) - es.energy(band));
  return p;
}

PhaseSpaceProjector::PhaseSpaceProjector(std::shared_ptr<const NumberLattice> lat,
                                         const TwoLevelField& model, const Frequencies& w,
                                         Band band, int order, int grid)
    : band_(band), order_(order) {
  if (order != 0 && order != 1) throw ConfigError("projectors exist at order 0 or 1 only");
  const auto& t = lat->truncation();
  const int width = std::max(t.n1_max - t.n1_min + 1, t.n2_max - t.n2_min + 1);
  const int m = grid > 0 ? grid : fft_size_at_least(width + 48);
  transform_ = std::make_unique<PhaseTransform>(lat, m);
  pi_.resize(std::size_t(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      pi_[i * m + j] = adiabatic_projector_2x2(model, Phase2(kTwoPi * i / m, kTwoPi * j / m), w, band, order);
}

Eigen::VectorXcd PhaseSpaceProjector::apply(const Eigen::VectorXcd& psi) const {
  std::vector<cplx> up, dn;
  transform_->to_phase(psi, up, dn);
  for (std::size_t k = 0; k < up.size(); ++k) {
    const Mat2& p = pi_[k];
    const cplx u = p(0, 0) * up[k] + p(0, 1) * dn[k];
    const cplx d = p(1, 0) * up[k] + p(1, 1) * dn[k];
    up[k] = u;
    dn[k] = d;
  }
  return transform_->to_number(up, dn);
}

Projection project(const TotalState& s, const Projector& p) {
  Projection r{s, 0.0};
  r.state.amp = p.apply(s.amp);
  r.weight = r.state.amp.squaredNorm();
  return r;
}

HalfspaceSplit halfspace_split(const TotalState& s, const Frequencies& w, double nperp_ref) {
  HalfspaceSplit r{s, s, 0.0};
  for (int k = 0; k < s.lattice->size(); ++k) {
    const bool below = rotated_coordinates(s.lattice->site(k), w).nperp < nperp_ref;
    auto& zeroed = below ? r.above : r.below;
    zeroed.amp(2 * k) = zeroed.amp(2 * k + 1) = 0.0;
  }
  r.weight_below = r.below.amp.squaredNorm();
  return r;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na <= 0.0 || nb <= 0.0) throw ZeroState("fidelity with a zero state");
  return std::norm(a.dot(b)) / (na * nb);
}

std::vector<double> nperp_marginal(const TotalState& s, const Frequencies& w, double origin,
                                   int bins) {
  std::vector<double> p(bins, 0.0);
  double total = 0.0;
  for (int k = 0; k < s.lattice->size(); ++k) {
    const double x = rotated_coordinates(s.lattice->site(k), w).nperp;
    const int b = std::clamp(static_cast<int>(std::floor(x - origin)), 0, bins - 1);
    const double m = std::norm(s.amp(2 * k)) + std::norm(s.amp(2 * k + 1));
    p[b] += m;
    total += m;
  }
  if (total > 0.0)
    for (double& x : p) x /= total;
  return p;
}

double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(p.size(), q.size()); ++i) s += std::sqrt(p[i] * q[i]);
  return s;
}

double weight_conservation_probe(const TotalState& s, const Projector& p, const Propagator& prop,
                                 const std::vector<double>& times) {
  const double w0 = project(s, p).weight;
  double worst = 0.0;
  for (const TotalState& st : evolve(prop, s, times))
    worst = std::max(worst, std::abs(project(st, p).weight - w0));
  return worst;
}

double predicted_weight(const std::vector<double>& density, double cell,
                        const std::vector<Vec3>& bloch, const Vec3& q) {
  Vec3 bbar = Vec3::Zero();
  double total = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    bbar += density[k] * cell * bloch[k];
    total += density[k] * cell;
  }
  bbar /= total;
  return 0.5 * (1.0 + bbar.dot(q));
}

double weight_metric_approx(double dphi1, double dphi2, const std::array<double, 3>& g) {
  if (std::max(dphi1, dphi2) > 0.15 * kPi)
    warn("phase width beyond 0.15π, the quadratic weight law is unreliable");
  return 1.0 - dphi1 * dphi1 * g[0] - dphi2 * dphi2 * g[2];
}

void write_cat_report_json(std::ostream& out, const CatSplitReport& r) {
  out << "{\n"
      << "  \"t_sep_over_T1\": " << fmt(r.t_sep_over_T1) << ",\n"
      << "  \"W_minus\": " << fmt(r.w_minus) << ",\n"
      << "  \"W_plus\": " << fmt(r.w_plus) << ",\n"
      << "  \"W_edge\": " << fmt(r.w_edge) << ",\n"
      << "  \"slope_minus\": " << fmt(r.slope_minus) << ",\n"
      << "  \"slope_plus\": " << fmt(r.slope_plus) << ",\n"
      << "  \"slope_theory\": " << fmt(r.slope_theory) << "\n"
      << "}\n";
}

double detect_separation(const std::vector<double>& times, const std::vector<TotalState>& minus,
                         const std::vector<TotalState>& plus, const Frequencies& w,
                         double threshold) {
  if (minus.empty()) return -1.0;
  const auto& tr = minus.front().lattice->truncation();
  const double lim = tr.nperp_max;
  const double origin = std::floor(tr.nperp_center) - std::ceil(lim) - 1.0;
  const int bins = 2 * static_cast<int>(std::ceil(lim)) + 4;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double bc = bhattacharyya(nperp_marginal(minus[i], w, origin, bins),
                                    nperp_marginal(plus[i], w, origin, bins));
    if (bc < threshold) return times[i];
  }
  return -1.0;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace catpump
