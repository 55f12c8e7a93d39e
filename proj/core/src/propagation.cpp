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
#include <catpump/propagation.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <ostream>

namespace catpump {

Propagator::Propagator(std::shared_ptr<const SparseHermitian> h, const Frequencies& w,
                       const PropagatorParams& p)
    : h_(std::move(h)), params_(p) {
  method_ = p.method;
  if (method_ == Method::automatic)
    method_ = h_->dimension() <= p.spectral_cap ? Method::spectral : Method::krylov;
  max_step_ = p.max_step > 0.0 ? p.max_step : (w.omega1 > 0.0 ? w.period1() / 200.0 : 0.1);
  if (method_ == Method::spectral) {
    eig_ = std::make_unique<HermitianEigen>(hermitian_eigen(*h_, p.spectral_cap));
  } else {
    if (p.krylov_dim < 2) throw ConfigError("Krylov subspace needs at least two vectors");
    // Unitarity probe on a fixed pseudo-random vector.
    Eigen::VectorXcd v(h_->dimension());
    for (int k = 0; k < v.size(); ++k) v(k) = cplx(std::sin(1.0 + k), std::cos(0.5 * k));
    const double n0 = v.norm();
    const double n1 = krylov(v, max_step_).norm();
    if (std::abs(n1 - n0) > 1e-9 * n0) throw EigensolverFailure("Krylov probe step is not unitary");
  }
}

Propagator build_propagator(std::shared_ptr<const SparseHermitian> h, const Frequencies& w,
                            const PropagatorParams& p) {
  return Propagator(std::move(h), w, p);
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& psi, double t) const {
  if (t == 0.0) return psi;
  if (method_ == Method::spectral) {
    Eigen::VectorXcd c = eig_->vectors.adjoint() * psi;
    for (int k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -eig_->values(k) * t);
    return eig_->vectors * c;
  }
  return krylov(psi, t);
}

Eigen::VectorXcd Propagator::krylov(Eigen::VectorXcd psi, double t) const {
  const int n = h_->dimension();
  const int mmax = std::min(params_.krylov_dim, n);
  const double dir = t < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(t);
  Eigen::MatrixXcd v(n, mmax + 1);
  const double scale = std::max(h_->max_abs(), 1e-300);
  while (remaining > 0.0) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return psi;
    v.col(0) = psi / beta0;
    Eigen::VectorXd alpha(mmax), beta(mmax);
    int m = mmax;
    bool exact = false;
    for (int j = 0; j < mmax; ++j) {
      Eigen::VectorXcd w = h_->m * v.col(j);
      alpha(j) = v.col(j).dot(w).real();
      // Full reorthogonalization, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd c = v.leftCols(j + 1).adjoint() * w;
        w.noalias() -= v.leftCols(j + 1) * c;
      }
      beta(j) = w.norm();
      if (beta(j) < 1e-12 * scale) {
        m = j + 1;
        exact = true;
        break;
      }
      v.col(j + 1) = w / beta(j);
    }
    ++steps_;
    Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      tm(j, j) = alpha(j);
      if (j + 1 < m) tm(j, j + 1) = tm(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm);
    const Eigen::MatrixXd& q = es.eigenvectors();
    double dt = std::min(remaining, max_step_);
    Eigen::VectorXcd y;
    for (int tries = 0;; ++tries) {
      Eigen::VectorXcd c(m);
      for (int k = 0; k < m; ++k) c(k) = q(0, k) * std::polar(1.0, -dir * es.eigenvalues()(k) * dt);
      y = q.cast<cplx>() * c;
      const double err = exact ? 0.0 : beta(m - 1) * std::abs(y(m - 1));
      if (err <= params_.krylov_tol) break;
      if (tries > 60) throw EigensolverFailure("Krylov step failed to reach tolerance");
      dt *= 0.5;
    }
    psi = beta0 * (v.leftCols(m) * y);
    remaining -= dt;
    if (remaining < 1e-14 * std::abs(t)) remaining = 0.0;
  }
  return psi;
}

double boundary_mass(const TotalState& s) {
  double m = 0.0;
  for (int k = 0; k < s.lattice->size(); ++k)
    if (s.lattice->near_edge(k)) m += std::norm(s.amp(2 * k)) + std::norm(s.amp(2 * k + 1));
  return m;
}

std::vector<TotalState> evolve(const Propagator& prop, const TotalState& state,
                               const std::vector<double>& times, const BoundaryPolicy& policy) {
  std::vector<TotalState> out;
  out.reserve(times.size());
  TotalState cur = state;
  double tcur = 0.0;
  bool warned = false;
  for (double t : times) {
    if (t < tcur) throw ConfigError("evolution times must be nondecreasing and start at 0 or later");
    TotalState next = state;
    if (prop.method() == Method::spectral) {
      next.amp = prop.apply(state.amp, t);
    } else {
      next.amp = prop.apply(cur.amp, t - tcur);
    }
    const double bm = boundary_mass(next);
    if (bm > policy.abort)
      throw BoundaryContamination("boundary mass " + fmt(bm) + " at t = " + fmt(t));
    if (bm > policy.warn && !warned) {
      warn("boundary mass " + fmt(bm) + " exceeds " + fmt(policy.warn) + " at t = " + fmt(t));
      warned = true;
    }
    cur = next;
    tcur = t;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<double> number_distribution(const TotalState& s) {
  std::vector<double> p(s.lattice->size());
  for (int k = 0; k < s.lattice->size(); ++k) p[k] = std::norm(s.amp(2 * k)) + std::norm(s.amp(2 * k + 1));
  return p;
}

ObservableRow observables(const TotalState& s, const Frequencies& w, double t) {
  ObservableRow r;
  r.t_over_T1 = t / w.period1();
  const double norm2 = s.norm2();
  r.norm = std::sqrt(norm2);
  r.boundary = boundary_mass(s);
  if (norm2 <= 0.0) throw ZeroState("observables of a zero state");
  double m1 = 0, m2 = 0, me = 0, mp = 0, s1 = 0, s2 = 0, se = 0, sp = 0;
  cplx ud = 0.0;
  double uu = 0.0, dd = 0.0;
  for (int k = 0; k < s.lattice->size(); ++k) {
    const auto [a, b] = s.lattice->site(k);
    const cplx u = s.amp(2 * k), d = s.amp(2 * k + 1);
    const double p = (std::norm(u) + std::norm(d)) / norm2;
    const Rotated rc = rotated_coordinates(a, b, w);
    m1 += p * a;
    m2 += p * b;
    me += p * rc.ne;
    mp += p * rc.nperp;
    s1 += p * a * a;
    s2 += p * b * b;
    se += p * rc.ne * rc.ne;
    sp += p * rc.nperp * rc.nperp;
    ud += std::conj(u) * d;
    uu += std::norm(u);
    dd += std::norm(d);
  }
  r.n1 = m1;
  r.n2 = m2;
  r.ne = me;
  r.nperp = mp;
  r.dn1 = std::sqrt(std::max(0.0, s1 - m1 * m1));
  r.dn2 = std::sqrt(std::max(0.0, s2 - m2 * m2));
  r.dne = std::sqrt(std::max(0.0, se - me * me));
  r.dnperp = std::sqrt(std::max(0.0, sp - mp * mp));
  r.q = Vec3(2.0 * ud.real(), 2.0 * ud.imag(), uu - dd) / norm2;
  r.purity = 0.5 * (1.0 + r.q.squaredNorm());
  return r;
}

double energy(const SparseHermitian& h, const Eigen::VectorXcd& psi) {
  return psi.dot(h.m * psi).real() / psi.squaredNorm();
}

void write_observable_csv(std::ostream& out, const std::vector<ObservableRow>& rows) {
  CsvWriter csv(out, {"t_over_T1", "n1_mean", "n2_mean", "nE_mean", "nperp_mean", "dnE", "dnperp",
                      "Qx", "Qy", "Qz", "purity", "norm", "boundary_mass"});
  for (const auto& r : rows)
    csv.row({r.t_over_T1, r.n1, r.n2, r.ne, r.nperp, r.dne, r.dnperp, r.q.x(), r.q.y(), r.q.z(),
             r.purity, r.norm, r.boundary});
}

}  // namespace catpump
