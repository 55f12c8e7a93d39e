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
#include <catpump/semiclassics.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace catpump {

namespace {

std::vector<double> channel(const GeometryMap& map, Band band, int which) {
  const auto& b = map.band(band);
  switch (which) {
    case 0: return b.energy;
    case 1: return b.curvature;
    default: {
      std::vector<double> g(b.g.size());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = b.g[k][which - 2];
      return g;
    }
  }
}

}  // namespace

BandSplines::BandSplines(const GeometryMap& map, Band band)
    : band_(band),
      omega_(map.omega),
      chern_(chern_number(map, band)),
      e_(map.m1(), map.m2(), channel(map, band, 0)),
      f_(map.m1(), map.m2(), channel(map, band, 1)),
      g11_(map.m1(), map.m2(), channel(map, band, 2)),
      g12_(map.m1(), map.m2(), channel(map, band, 3)),
      g22_(map.m1(), map.m2(), channel(map, band, 4)) {}

std::array<double, 2> BandSplines::rate(double p1, double p2) const {
  const auto st = e_.locate(p1, p2);  // all channels share the grid
  const auto e = e_.eval(st);
  const double f = f_.value(st);
  return {e.fx + omega_.omega2 * f, e.fy - omega_.omega1 * f};
}

namespace {

// Times in (ta, tb) at which p − ω t crosses a multiple of h.
void crossings(double p, double omega, double h, double ta, double tb, std::vector<double>& out) {
  if (omega == 0.0) return;
  const double xa = (p - omega * ta) / h, xb = (p - omega * tb) / h;
  const long lo = static_cast<long>(std::ceil(std::min(xa, xb)));
  const long hi = static_cast<long>(std::floor(std::max(xa, xb)));
  for (long k = lo; k <= hi; ++k) {
    const double t = (p - k * h) / omega;
    if (t > ta && t < tb) out.push_back(t);
  }
}

// Cumulative integral of the rates along Φ0 − ωt at the requested times.
void integrate(const BandSplines& s, const Phase2& phi0, const std::vector<double>& times,
               double max_step, std::vector<double>& n1, std::vector<double>& n2) {
  static constexpr double kNode[4] = {-0.8611363115940526, -0.3399810435848563,
                                      0.3399810435848563, 0.8611363115940526};
  static constexpr double kWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                        0.6521451548625461, 0.3478548451374538};
  const Frequencies& w = s.omega();
  const double h1 = kTwoPi / s.grid1(), h2 = kTwoPi / s.grid2();
  n1.assign(times.size(), 0.0);
  n2.assign(times.size(), 0.0);
  double a1 = 0.0, a2 = 0.0, t0 = 0.0;
  std::vector<double> cuts;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t1 = times[k];
    if (t1 < t0) throw ConfigError("trajectory times must be nondecreasing from 0");
    if (t1 > t0) {
      cuts.assign({t0, t1});
      crossings(phi0.phi1(), w.omega1, h1, t0, t1, cuts);
      crossings(phi0.phi2(), w.omega2, h2, t0, t1, cuts);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((cuts[c + 1] - cuts[c]) / max_step)));
        const double len = (cuts[c + 1] - cuts[c]) / pieces;
        for (int p = 0; p < pieces; ++p) {
          const double mid = cuts[c] + (p + 0.5) * len, half = 0.5 * len;
          for (int q = 0; q < 4; ++q) {
            const double t = mid + half * kNode[q];
            const auto r = s.rate(phi0.phi1() - w.omega1 * t, phi0.phi2() - w.omega2 * t);
            a1 += kWeight[q] * half * r[0];
            a2 += kWeight[q] * half * r[1];
          }
        }
      }
    }
    n1[k] = a1;
    n2[k] = a2;
    t0 = t1;
  }
}

double default_step(const Frequencies& w) { return w.period1() / 400.0; }

// Marks the largest weights; the unmarked ones sum to at most `tail` of the
// total, which bounds what skipping their trajectories can change.
std::vector<char> significant(const std::vector<double>& weight, double tail = 1e-12) {
  std::vector<std::size_t> order(weight.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return weight[a] < weight[b]; });
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<char> keep(weight.size(), 1);
  double dropped = 0.0;
  for (std::size_t k : order) {
    if (dropped + weight[k] > tail * total) break;
    dropped += weight[k];
    keep[k] = 0;
  }
  return keep;
}

}  // namespace

ClassicalTrajectory classical_trajectory(const BandSplines& s, const Phase2& phi0,
                                         const std::vector<double>& times, double max_step) {
  ClassicalTrajectory tr;
  tr.band = s.band();
  tr.phi0 = phi0;
  tr.times = times;
  integrate(s, phi0, times, max_step > 0.0 ? max_step : default_step(s.omega()), tr.n1, tr.n2);
  tr.ne.resize(times.size());
  tr.nperp.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Rotated r = rotated_coordinates(tr.n1[k], tr.n2[k], s.omega());
    tr.ne[k] = r.ne;
    tr.nperp[k] = r.nperp;
  }
  return tr;
}

ClassicalTrajectory classical_trajectory(const GeometryMap& map, Band band, const Phase2& phi0,
                                         const std::vector<double>& times) {
  return classical_trajectory(BandSplines(map, band), phi0, times);
}

void write_trajectory_csv(std::ostream& out, const ClassicalTrajectory& tr, double period1) {
  CsvWriter csv(out, {"t_over_T1", "n1", "n2", "nE", "nperp"});
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    csv.row({tr.times[k] / period1, tr.n1[k], tr.n2[k], tr.ne[k], tr.nperp[k]});
}

MomentPrediction phase_averaged_moments(const BandSplines& s, const std::vector<double>& density,
                                        int m, const std::vector<double>& times) {
  if (density.size() != std::size_t(m) * m) throw ConfigError("density does not match its grid");
  const std::vector<char> keep = significant(density);
  const std::size_t nt = times.size();
  std::vector<double> s1(nt), s2(nt), s11(nt), s12(nt), s22(nt);
  double total = 0.0;
  std::vector<double> n1, n2;
  const double step = default_step(s.omega());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double rho = density[i * m + j];
      if (!keep[i * m + j]) continue;
      integrate(s, Phase2(kTwoPi * i / m, kTwoPi * j / m), times, step, n1, n2);
      total += rho;
      for (std::size_t k = 0; k < nt; ++k) {
        s1[k] += rho * n1[k];
        s2[k] += rho * n2[k];
        s11[k] += rho * n1[k] * n1[k];
        s12[k] += rho * n1[k] * n2[k];
        s22[k] += rho * n2[k] * n2[k];
      }
    }
  }
  if (total <= 0.0) throw ZeroState("phase density is empty");
  MomentPrediction p;
  p.times = times;
  for (std::size_t k = 0; k < nt; ++k) {
    const double a = s1[k] / total, b = s2[k] / total;
    p.mean1.push_back(a);
    p.mean2.push_back(b);
    p.var11.push_back(s11[k] / total - a * a);
    p.var12.push_back(s12[k] / total - a * b);
    p.var22.push_back(s22[k] / total - b * b);
  }
  return p;
}

std::vector<SpreadingRow> spreading_prediction(const BandSplines& s, const TotalState& projected,
                                               const std::vector<double>& times, double u1,
                                               double u2, int grid) {
  const NumberLattice& lat = *projected.lattice;
  const auto& tr = lat.truncation();
  const int width = std::max(tr.n1_max - tr.n1_min + 1, tr.n2_max - tr.n2_min + 1);
  const int m = grid > 0 ? grid : fft_size_at_least(std::max(width, 64));
  const double w = projected.norm2();
  if (w <= 0.0) throw ZeroState("spreading of a zero state");

  double mean0 = 0.0, sq0 = 0.0;
  Eigen::VectorXcd namp = projected.amp;
  for (int k = 0; k < lat.size(); ++k) {
    const auto [a, b] = lat.site(k);
    const double nu = u1 * a + u2 * b;
    const double p = std::norm(projected.amp(2 * k)) + std::norm(projected.amp(2 * k + 1));
    mean0 += nu * p / w;
    sq0 += nu * nu * p / w;
    namp(2 * k) *= nu;
    namp(2 * k + 1) *= nu;
  }
  const double var0 = sq0 - mean0 * mean0;

  PhaseTransform pt(projected.lattice, m);
  std::vector<cplx> up, dn, nup, ndn;
  pt.to_phase(projected.amp, up, dn);
  pt.to_phase(namp, nup, ndn);
  const std::size_t cells = std::size_t(m) * m;
  std::vector<double> rho(cells), cur(cells), acur(cells);
  double total = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    rho[k] = std::norm(up[k]) + std::norm(dn[k]);
    cur[k] = (std::conj(up[k]) * nup[k] + std::conj(dn[k]) * ndn[k]).real();
    acur[k] = std::abs(cur[k]);
    total += rho[k];
  }
  const std::vector<char> keep_rho = significant(rho), keep_cur = significant(acur);

  const Frequencies& om = s.omega();
  auto guu = [&](double p1, double p2) {
    const auto g = s.metric(p1, p2);
    return u1 * u1 * g[0] + 2 * u1 * u2 * g[1] + u2 * u2 * g[2];
  };
  const std::size_t nt = times.size();
  std::vector<double> sr(nt), srr(nt), sj(nt), sg(nt);
  std::vector<double> n1, n2;
  const double step = default_step(om);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::size_t k = std::size_t(i) * m + j;
      if (!keep_rho[k] && !keep_cur[k]) continue;
      const double p1 = kTwoPi * i / m, p2 = kTwoPi * j / m;
      integrate(s, Phase2(p1, p2), times, step, n1, n2);
      const double g0 = guu(p1, p2);
      for (std::size_t q = 0; q < nt; ++q) {
        const double x = u1 * n1[q] + u2 * n2[q];
        sr[q] += rho[k] * x;
        srr[q] += rho[k] * x * x;
        sj[q] += cur[k] * x;
        sg[q] += rho[k] * (guu(p1 - om.omega1 * times[q], p2 - om.omega2 * times[q]) - g0);
      }
    }
  }
  std::vector<SpreadingRow> rows(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    SpreadingRow& r = rows[q];
    r.t = times[q];
    const double mean = sr[q] / total;
    r.variance = srr[q] / total - mean * mean;
    r.metric = sg[q] / total;
    r.correlation = 2.0 * sj[q] / total - 2.0 * mean0 * mean;
    r.spread = std::sqrt(std::max(0.0, var0 + r.variance + r.metric + r.correlation));
  }
  return rows;
}

std::vector<QuasiPeriod> quasi_periods(double omega1, double omega2, long max_p1) {
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw ConfigError("quasi-periods need positive frequencies");
  const double r = omega2 / omega1;
  std::vector<QuasiPeriod> out;
  long h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double x = r;
  for (int guard = 0; guard < 64; ++guard) {
    const double a = std::floor(x);
    const long ai = static_cast<long>(a);
    const long h = ai * h1 + h2;
    const long k = ai * k1 + k2;
    if (k > max_p1) break;
    const double err = kTwoPi * std::abs(k * r - h);
    out.push_back({k, h, k * kTwoPi / omega1, err});
    h2 = h1, h1 = h;
    k2 = k1, k1 = k;
    const double frac = x - a;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }
  return out;
}

void write_quasi_periods_json(std::ostream& out, const std::vector<QuasiPeriod>& q) {
  out << "[\n";
  for (std::size_t i = 0; i < q.size(); ++i) {
    out << "  {\"p1\": " << q[i].p1 << ", \"p2\": " << q[i].p2 << ", \"period\": " << fmt(q[i].period)
        << ", \"rephasing_error\": " << fmt(q[i].rephasing_error) << "}"
        << (i + 1 < q.size() ? ",\n" : "\n");
  }
  out << "]\n";
}

AdiabaticTimescale adiabatic_timescale(const TwoLevelField& model, const Frequencies& w, int grid) {
  auto eps_at = [&](double a, double b) {
    const Phase2 p(a, b);
    const Vec3 h = model.at(p);
    const double r2 = h.squaredNorm();
    const Vec3 hh = h / std::sqrt(r2);
    const Vec3 v = -(w.omega1 * model.derivative(p, 0) + w.omega2 * model.derivative(p, 1));
    return (v - hh * hh.dot(v)).norm() / (4.0 * r2);
  };
  const double step = kTwoPi / grid;
  double best = -1.0, x = 0.0, y = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double e = eps_at(i * step, j * step);
      if (e > best) best = e, x = i * step, y = j * step;
    }
  for (double d = step; d > 1e-10; ) {
    bool moved = false;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double e = eps_at(x + dx * d, y + dy * d);
      if (e > best) best = e, x += dx * d, y += dy * d, moved = true;
    }
    if (!moved) d *= 0.5;
  }
  AdiabaticTimescale r;
  r.epsilon = best;
  r.tau_over_T1 = best > 0.0 ? 0.1 * std::exp(kPi / (4.0 * best)) : std::numeric_limits<double>::infinity();
  r.tau = r.tau_over_T1 * (w.omega1 > 0.0 ? w.period1() : std::numeric_limits<double>::infinity());
  return r;
}

PurityPrediction purity_prediction(const BandSplines& s, const Phase2& phi0, double dphi1,
                                   double dphi2, const std::vector<double>& times) {
  if (std::max(dphi1, dphi2) > 0.15 * kPi)
    warn("phase width beyond 0.15π, the quadratic purity law is unreliable");
  PurityPrediction p;
  p.times = times;
  const Frequencies& w = s.omega();
  for (double t : times) {
    const auto g = s.metric(phi0.phi1() - w.omega1 * t, phi0.phi2() - w.omega2 * t);
    p.purity.push_back(1.0 - 2.0 * dphi1 * dphi1 * g[0] - 2.0 * dphi2 * dphi2 * g[2]);
  }
  if (!p.purity.empty())
    p.average = std::accumulate(p.purity.begin(), p.purity.end(), 0.0) / double(p.purity.size());
  p.bound = 1.0 - std::abs(s.chern()) * 0.5 * (dphi1 * dphi1 + dphi2 * dphi2) / kPi;
  return p;
}

}  // namespace catpump
