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

// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is nonzero only when a run cannot be executed; a FAIL line is
// a measured result, not an execution error.
//
//   acceptance [--paper-scale] [--only 2,4,8]

#include "runner.hpp"

#include <catpump/adiabatic.hpp>
#include <catpump/eigensolver.hpp>
#include <catpump/errors.hpp>
#include <catpump/semiclassics.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace {

using namespace catpump;
using namespace catpump::cli;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ------------------------------------------------------------ tolerances

constexpr double kChernSeconds = 5.0;
constexpr double kSlopeRel = 0.05;
constexpr double kWeightMatch = 0.01;
constexpr double kSepLo = 6.0, kSepHi = 10.0;
constexpr double kFid0 = 0.99, kFid1 = 0.995;
constexpr double kMetricValue = 0.25, kMetricOracle = 1e-5;
constexpr double kPurityTrack = 0.01, kPurityBoundSlack = 1e-3;
constexpr double kOracleQuanta = 0.1;
constexpr double kRefocusWindow = 0.5, kRefocusDepth = 0.6, kNarrowVariation = 0.1;
constexpr double kIdempotence0 = 1e-10, kExponent = 2.0, kExponentTol = 0.1;
constexpr double kAlgebraSeconds = 300.0;
constexpr double kWeightDrift = 1e-3, kTauTarget = 3100.0, kTauFactor = 2.0;
constexpr double kSymmetricCat = 0.05;
constexpr double kSplitIdentity = 1e-3;

// Criteria are evaluated in dependency order and printed by number.
std::map<int, std::pair<bool, std::string>> results;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  results[id] = {ok, what + ": " + detail};
  std::printf("  criterion %d evaluated\n", id);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// ------------------------------------------------------------ dynamics

struct Series {
  ExperimentConfig c;
  TwoLevelField model = TwoLevelField::bhz(2.0);
  Frequencies w;
  double t1 = 0.0;
  std::shared_ptr<const NumberLattice> lat;
  std::vector<double> times;
  std::vector<TotalState> states;
  // normalized weights and projected states; index [order]
  std::vector<TotalState> minus[2], plus[2];
  std::vector<double> w_minus[2], w_plus[2];
  std::vector<double> w_below, f_order[2];
  int grid = 0;
  double seconds = 0.0;

  std::size_t at(double t_over_T1) const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (std::abs(times[i] / t1 - t_over_T1) < std::abs(times[k] / t1 - t_over_T1)) k = i;
    return k;
  }
};

Series simulate(ExperimentConfig c) {
  const auto t0 = Clock::now();
  validate(c);
  Series s;
  s.c = c;
  s.model = c.model();
  s.w = c.omega();
  s.t1 = s.w.period1();
  s.lat = make_lattice(c);
  const TotalState s0 = initial_state(c, s.lat);
  auto h = std::make_shared<const SparseHermitian>(assemble_total(*s.lat, s.model, s.w));
  const Propagator prop(h, s.w, c.propagator_params());
  s.times = c.sample_times();
  s.states = evolve(prop, s0, s.times, c.boundary_policy());

  const double ref = observables(s0, s.w).nperp;
  for (int order : {0, 1}) {
    const PhaseSpaceProjector pm(s.lat, s.model, s.w, Band::minus, order);
    const PhaseSpaceProjector pp(s.lat, s.model, s.w, Band::plus, order);
    s.grid = pm.grid();
    for (const TotalState& st : s.states) {
      const double n2 = st.norm2();
      Projection a = project(st, pm), b = project(st, pp);
      s.w_minus[order].push_back(a.weight / n2);
      s.w_plus[order].push_back(b.weight / n2);
      s.minus[order].push_back(std::move(a.state));
      s.plus[order].push_back(std::move(b.state));
    }
  }
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const HalfspaceSplit split = halfspace_split(s.states[i], s.w, ref);
    s.w_below.push_back(split.weight_below / s.states[i].norm2());
    for (int order : {0, 1}) s.f_order[order].push_back(fidelity(split.below.amp, s.minus[order][i].amp));
  }
  s.seconds = seconds_since(t0);
  std::printf("  run %-6s dim %6d  samples %3zu  grid %3d  %.1f s\n", c.preset.c_str(),
              s.lat->dimension(), s.times.size(), s.grid, s.seconds);
  std::fflush(stdout);
  return s;
}

struct SepResult {
  bool detected = false;
  double t_over_T1 = 0.0;
};

SepResult separation(const Series& s) {
  const double t = detect_separation(s.times, s.minus[1], s.plus[1], s.w, s.c.separation_threshold);
  return t >= 0.0 ? SepResult{true, t / s.t1} : SepResult{false, s.c.t_sep_fallback_T1};
}

double worst_oracle_gap(const Series& s, double t_max_T1) {
  const GeometryMap gmap = geometry_map(s.model, s.w, 1, s.c.geometry_grid, s.c.geometry_grid);
  const double r = s.w.norm(), ue1 = s.w.omega1 / r, ue2 = s.w.omega2 / r;
  std::vector<double> times;
  for (double t : s.times)
    if (t / s.t1 <= t_max_T1 + 1e-9) times.push_back(t);
  double worst = 0.0;
  for (Band band : {Band::minus, Band::plus}) {
    const auto& comp = band == Band::minus ? s.minus[1] : s.plus[1];
    const BandSplines spl(gmap, band);
    const PhaseAmplitudeMap pa = phase_amplitude(comp.front(), s.grid);
    std::vector<double> density(pa.up.size());
    for (std::size_t k = 0; k < density.size(); ++k) density[k] = pa.density(int(k));
    const MomentPrediction mp = phase_averaged_moments(spl, density, s.grid, times);
    const ObservableRow start = observables(comp.front(), s.w);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const ObservableRow q = observables(comp[k], s.w);
      worst = std::max(worst, std::abs(q.nperp - start.nperp - mp.mean_along(k, -ue2, ue1)));
      worst = std::max(worst, std::abs(q.ne - start.ne - mp.mean_along(k, ue1, ue2)));
    }
  }
  return worst;
}

std::vector<double> spread_perp(const std::vector<TotalState>& comp, const Frequencies& w) {
  std::vector<double> out;
  for (const auto& st : comp) out.push_back(observables(st, w).dnperp);
  return out;
}

// ------------------------------------------------------------ criteria

void chern_quantization() {
  const auto t0 = Clock::now();
  const ExperimentConfig c;
  bool ok = true;
  std::string seen;
  for (int m : {32, 64, 128})
    for (int order : {0, 1}) {
      const GeometryMap g = geometry_map(c.model(), c.omega(), order, m, m);
      const int cm = chern_number(g, Band::minus), cp = chern_number(g, Band::plus);
      ok = ok && cm == 1 && cp == -1;
      if (cm != 1 || cp != -1) seen += fmt(" grid %d order %d gave %d/%d", m, order, cm, cp);
    }
  const double sec = seconds_since(t0);
  report(1, ok && sec < kChernSeconds, "Chern quantization",
         fmt("C- = +1, C+ = -1 on grids 32/64/128 at orders 0 and 1%s; %.2f s (limit %.0f s)",
             seen.c_str(), sec, kChernSeconds));
}

void drift_slopes(const Series& a) {
  std::vector<double> x, ym, yp;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    const double t = a.times[i] / a.t1;
    if (t < 2.0 - 1e-9 || t > 10.0 + 1e-9) continue;
    x.push_back(t);
    ym.push_back(observables(a.minus[1][i], a.w).nperp);
    yp.push_back(observables(a.plus[1][i], a.w).nperp);
  }
  const double theory = a.w.norm() / a.w.omega1;  // |ω|/(2π)·|C| per unit time, in T1
  const double sm = fit_slope(x, ym), sp = fit_slope(x, yp);
  const double em = std::abs(sm / -theory - 1.0), ep = std::abs(sp / theory - 1.0);
  const bool ok = sm < 0 && sp > 0 && em <= kSlopeRel && ep <= kSlopeRel;
  report(2, ok, "topological drift (fig3a)",
         fmt("slopes %.4f / %+.4f per T1 vs -/+%.4f, deviations %.1f%% / %.1f%% (limit %.0f%%); "
             "%.0f s",
             sm, sp, theory, 100 * em, 100 * ep, 100 * kSlopeRel, a.seconds));
}

void weight_identification(const std::vector<const Series*>& runs) {
  bool weights = true, detect = true;
  std::string d;
  for (const Series* s : runs) {
    const SepResult sep = separation(*s);
    const std::size_t k = s->at(sep.t_over_T1);
    const double diff = std::abs(s->w_below[k] - s->w_minus[1][k]);
    weights = weights && diff <= kWeightMatch;
    const bool in = sep.detected && sep.t_over_T1 >= kSepLo && sep.t_over_T1 <= kSepHi;
    detect = detect && in;
    d += fmt(" %s: t_sep %s %.2f T1, |W_< - W-| = %.4f;", s->c.preset.c_str(),
             sep.detected ? "detected" : "not detected, fallback", sep.t_over_T1, diff);
  }
  report(3, weights && detect, "cat separation and weight identification",
         d + fmt(" weight limit %.2f %s, detection in [%.0f, %.0f] T1 %s", kWeightMatch,
                 weights ? "met" : "missed", kSepLo, kSepHi, detect ? "met" : "missed"));
}

void split_fidelity(const std::vector<const Series*>& runs) {
  bool ok = true;
  std::string d;
  for (const Series* s : runs) {
    const double ts = separation(*s).t_over_T1;
    double f0 = 1.0, f1 = 1.0;
    bool ordered = true;
    int n = 0;
    for (std::size_t i = 0; i < s->times.size(); ++i) {
      const double t = s->times[i] / s->t1;
      if (t <= ts + 1e-9 || t >= 12.0 - 1e-9) continue;
      ++n;
      f0 = std::min(f0, s->f_order[0][i]);
      f1 = std::min(f1, s->f_order[1][i]);
      ordered = ordered && s->f_order[1][i] > s->f_order[0][i];
    }
    ok = ok && n > 0 && f0 >= kFid0 && f1 >= kFid1 && ordered;
    d += fmt(" %s: min F0 %.4f, min F1 %.4f, F1 > F0 %s (%d samples);", s->c.preset.c_str(), f0, f1,
             ordered ? "always" : "not always", n);
  }
  report(4, ok, "split-component fidelity",
         d + fmt(" limits %.3f / %.3f", kFid0, kFid1));
}

// g_ii from 1 − |⟨ψ(0)|ψ(±δ e_i)⟩|², averaged over ± to cancel the O(δ³) term.
double overlap_deficit_metric(const TwoLevelField& f, int axis) {
  const double d = 1e-4;
  const Spinor a = eigensystem_at(f, Phase2()).vector(Band::minus);
  double sum = 0.0;
  for (double s : {d, -d}) {
    const Spinor b = eigensystem_at(f, Phase2(axis == 0 ? s : 0.0, axis == 1 ? s : 0.0)).vector(Band::minus);
    sum += 1.0 - std::norm(a.dot(b));
  }
  return sum / (2 * d * d);
}

void weight_metric_law() {
  ExperimentConfig c = preset_config("fig4");
  const auto jet = bloch_jet(c.model(), Phase2(), c.omega(), Band::minus, 0);
  const auto g = metric_from_jet(jet);
  const double o11 = overlap_deficit_metric(c.model(), 0), o22 = overlap_deficit_metric(c.model(), 1);
  const double metric_err = std::max({std::abs(g[0] - kMetricValue), std::abs(g[2] - kMetricValue),
                                      std::abs(o11 - kMetricValue), std::abs(o22 - kMetricValue),
                                      std::abs(g[0] - o11), std::abs(g[2] - o22)});
  bool ok = metric_err <= kMetricOracle;
  double worst_ratio = 0.0;
  for (int k = 0; k < 9; ++k) {
    const double dphi = (0.02 + 0.01 * k) * kPi;
    const WeightPoint p = static_weight(c, dphi, 0.0);
    const double resid = std::abs(p.w_minus - (1.0 - 2.0 * dphi * dphi * kMetricValue));
    const double bound = 5.0 * std::pow(dphi, 4);
    worst_ratio = std::max(worst_ratio, resid / bound);
    ok = ok && resid <= bound;
  }
  report(5, ok, "weight-metric law",
         fmt("worst residual / 5dphi^4 = %.3f over dphi in [0.02, 0.1]pi; g11 = %.8f, g22 = %.8f, "
             "overlap-deficit oracle %.8f / %.8f, worst metric error %.1e (limit %.0e)",
             worst_ratio, g[0], g[2], o11, o22, metric_err, kMetricOracle));
}

void purity_tracking(const Series& s) {
  const GeometryMap gmap = geometry_map(s.model, s.w, 1, s.c.geometry_grid, s.c.geometry_grid);
  const double d1 = s.c.mode1.phase_width(), d2 = s.c.mode2.phase_width();
  const PurityPrediction pm =
      purity_prediction(BandSplines(gmap, Band::minus), Phase2(s.c.mode1.phi0, s.c.mode2.phi0), d1, d2, s.times);
  double worst = 0.0, t_worst = 0.0, avg = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] / s.t1 > 10.0 + 1e-9) continue;
    const double q = observables(s.minus[1][i], s.w).purity;
    const double dev = std::abs(q - pm.purity[i]);
    if (dev > worst) worst = dev, t_worst = s.times[i] / s.t1;
    avg += q;
    ++n;
  }
  avg /= n;
  const double dphi = 0.5 * (d1 + d2);
  const double bound = 1.0 - dphi * dphi / kPi;
  report(6, worst <= kPurityTrack && avg <= bound + kPurityBoundSlack,
         "purity-metric tracking and Chern bound (fig5)",
         fmt("max |gamma_q - gamma_metric| = %.4f at %.2f T1 (limit %.2f); <gamma> = %.4f vs bound "
             "%.4f + %.0e",
             worst, t_worst, kPurityTrack, avg, bound, kPurityBoundSlack));
}

void oracle_equivalence(const std::vector<const Series*>& runs) {
  bool ok = true;
  std::string d;
  for (const Series* s : runs) {
    const double gap = worst_oracle_gap(*s, 10.0);
    ok = ok && gap <= kOracleQuanta;
    d += fmt(" %s %.4f;", s->c.preset.c_str(), gap);
  }
  report(7, ok, "quantum vs phase-averaged trajectories",
         "max |<n> - <n>_classical| over n_perp, n_E, both bands, t <= 10 T1:" + d +
             fmt(" limit %.1f quanta", kOracleQuanta));
}

void breathing(const Series& q, const Series& narrow) {
  bool ok = true;
  std::string d;
  const std::vector<double> periods{2.0, 3.0, 5.0, 8.0};
  for (Band band : {Band::minus, Band::plus}) {
    const auto sp = spread_perp(band == Band::minus ? q.minus[1] : q.plus[1], q.w);
    d += fmt(" %s:", name(band));
    for (std::size_t p = 1; p < periods.size(); ++p) {
      std::size_t best = 0;
      double lo = 1e300, hi = 0.0;
      for (std::size_t i = 0; i < q.times.size(); ++i) {
        const double t = q.times[i] / q.t1;
        if (std::abs(t - periods[p]) <= kRefocusWindow + 1e-9 && sp[i] < lo) lo = sp[i], best = i;
        if (t > periods[p - 1] && t < periods[p]) hi = std::max(hi, sp[i]);
      }
      const bool local = best > 0 && best + 1 < sp.size() && sp[best] < sp[best - 1] && sp[best] < sp[best + 1];
      const bool deep = lo < kRefocusDepth * hi;
      ok = ok && local && deep;
      d += fmt(" %.0fT1 min %.3f at %.3f T1 (max before %.3f)%s", periods[p], lo, q.times[best] / q.t1,
               hi, local && deep ? "" : " MISSED");
    }
  }
  double var = 0.0;
  const auto sn = spread_perp(narrow.minus[1], narrow.w);
  const auto snp = spread_perp(narrow.plus[1], narrow.w);
  for (std::size_t i = 0; i < narrow.times.size(); ++i) {
    if (narrow.times[i] / narrow.t1 > 10.0 + 1e-9) continue;
    var = std::max({var, std::abs(sn[i] / sn.front() - 1.0), std::abs(snp[i] / snp.front() - 1.0)});
  }
  ok = ok && var < kNarrowVariation;
  report(8, ok, "Bloch breathing and refocusing",
         "quasi-Fock (fig6) dn_perp minima within " + fmt("%.1f", kRefocusWindow) +
             " T1, depth limit " + fmt("%.0f%%", 100 * kRefocusDepth) + ":" + d +
             fmt("; fig3a dn_perp variation %.2f%% (limit %.0f%%)", 100 * var, 100 * kNarrowVariation));
}

void projector_algebra() {
  const auto t0 = Clock::now();
  const ExperimentConfig c;
  const TwoLevelField model = c.model();
  const Frequencies base = c.omega();
  const std::vector<double> scales{0.2, 0.45, 1.0, 2.0};
  // zero-frequency data are ω independent; the window is fixed in n1, n2
  const auto lat = std::make_shared<const NumberLattice>(build_lattice(rotated_window(base, 7, 9)));
  const auto eig = std::make_shared<const HermitianEigen>(hermitian_eigen(assemble_zero_frequency(*lat, model)));
  const BandCuts cuts = band_cuts(model);
  std::vector<double> lx, li, lc;
  double idem0 = 0.0;
  std::string d;
  for (double sc : scales) {
    const Frequencies w = base.scaled(sc);
    const SparseHermitian ht = assemble_total(*lat, model, w);
    const LatticeProjector p0(eig, lat, w, cuts, model.gap(), Band::minus, 0);
    const LatticeProjector p1(eig, lat, w, cuts, model.gap(), Band::minus, 1);
    const ProjectorResiduals r0 = projector_residuals(p0, ht, *lat, 3);
    const ProjectorResiduals r1 = projector_residuals(p1, ht, *lat, 3);
    idem0 = std::max(idem0, r0.idempotence);
    lx.push_back(std::log(sc));
    li.push_back(std::log(r1.idempotence));
    lc.push_back(std::log(r1.commutator));
    d += fmt(" x%.2f: %.2e/%.2e/%.2e;", sc, r0.idempotence, r1.idempotence, r1.commutator);
  }
  const double ei = fit_slope(lx, li), ec = fit_slope(lx, lc);
  const double sec = seconds_since(t0);
  const bool ok = idem0 <= kIdempotence0 && std::abs(ei - kExponent) <= kExponentTol &&
                  std::abs(ec - kExponent) <= kExponentTol && sec < kAlgebraSeconds;
  report(9, ok, "projector algebra",
         fmt("dim %d, residuals (order-0 idem / order-1 idem / order-1 comm)", lat->dimension()) + d +
             fmt(" exponents %.3f / %.3f (target %.1f +- %.1f), order-0 idem %.1e (limit %.0e); %.0f s",
                 ei, ec, kExponent, kExponentTol, idem0, kIdempotence0, sec));
}

void weight_conservation(const Series& s) {
  double drift = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] / s.t1 > 20.0 + 1e-9) continue;
    drift = std::max({drift, std::abs(s.w_minus[1][i] - s.w_minus[1][0]),
                      std::abs(s.w_plus[1][i] - s.w_plus[1][0])});
  }
  const AdiabaticTimescale a = adiabatic_timescale(s.model, s.w);
  const bool tau_ok = a.tau_over_T1 >= kTauTarget / kTauFactor && a.tau_over_T1 <= kTauTarget * kTauFactor;
  report(10, drift <= kWeightDrift && tau_ok, "weight conservation and adiabatic horizon",
         fmt("order-1 weight drift %.2e over %.0f T1 (limit %.0e); tau = %.1f T1 (target %.0f, factor %.0f)",
             drift, s.times.back() / s.t1, kWeightDrift, a.tau_over_T1, kTauTarget, kTauFactor));
}

void symmetric_cats() {
  const ExperimentConfig c = preset_config("fig8");
  double worst_d = 0.0, worst_t = 0.0;
  for (double d : c.sweep_dphi_over_pi)
    worst_d = std::max(worst_d, std::abs(static_weight(c, d * kPi, kPi / 2).w_minus - 0.5));
  for (double th : c.sweep_theta_over_pi)
    worst_t = std::max(worst_t, std::abs(static_weight(c, c.sweep_theta_dphi_over_pi * kPi, th * kPi).w_minus - 0.5));
  report(11, worst_d <= kSymmetricCat && worst_t <= kSymmetricCat, "symmetric-cat protocols",
         fmt("theta = pi/2: max |W- - 0.5| = %.2e over %zu widths in [%.2f, %.2f]pi; dphi = %.2fpi: "
             "max %.2e over %zu qubit angles (limit %.2f)",
             worst_d, c.sweep_dphi_over_pi.size(), c.sweep_dphi_over_pi.front(), c.sweep_dphi_over_pi.back(),
             c.sweep_theta_dphi_over_pi, worst_t, c.sweep_theta_over_pi.size(), kSymmetricCat));
}

void density_split(const Series& s) {
  double worst = 0.0;
  std::string d;
  for (double t : {0.0, 2.5, 5.0, 7.5, 10.0}) {
    const std::size_t k = s.at(t);
    const PhaseAmplitudeMap m = phase_amplitude(s.states[k], s.grid, BandResolution{&s.model, s.w, Band::minus, 0});
    const PhaseAmplitudeMap p = phase_amplitude(s.states[k], s.grid, BandResolution{&s.model, s.w, Band::plus, 0});
    double peak = 0.0, dev = 0.0;
    for (int i = 0; i < s.grid * s.grid; ++i) {
      peak = std::max(peak, m.density(i));
      dev = std::max(dev, std::abs(m.band_density(i) + p.band_density(i) - m.density(i)));
    }
    worst = std::max(worst, dev / peak);
    d += fmt(" %.1f", s.times[k] / s.t1);
  }
  report(12, worst <= kSplitIdentity, "phase-density split identity (fig6)",
         fmt("max pointwise | |chi+|^2 + |chi-|^2 - rho | / max rho = %.1e (limit %.0e) at t/T1 =",
             worst, kSplitIdentity) + d);
}

// Dynamics runs are built on first use and shared between criteria.
class Runs {
 public:
  explicit Runs(bool full_scale) : full_scale_(full_scale) {}

  const Series& operator()(const std::string& name) {
    auto& slot = cache_[name];
    if (!slot) slot = std::make_unique<Series>(simulate(config(name)));
    return *slot;
  }

 private:
  ExperimentConfig config(const std::string& name) const {
    ExperimentConfig c = preset_config(name);
    if (name.starts_with("fig3")) {
      if (full_scale_) apply_paper_scale(c);
      if (name == "fig3c") {
        if (!full_scale_) c.ne_max = 14, c.nperp_max = 60;  // room for the 20 T1 weight horizon
        c.t_max_T1 = 20.0;
        c.snapshots_T1 = {};
      }
    }
    return c;
  }

  bool full_scale_;
  std::map<std::string, std::unique_ptr<Series>> cache_;
};

}  // namespace

int main(int argc, char** argv) {
  bool full_scale = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--paper-scale") == 0) {
      full_scale = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string id; std::getline(list, id, ',');) only.insert(std::stoi(id));
    } else {
      std::fprintf(stderr, "usage: acceptance [--paper-scale] [--only 2,4,8]\n");
      return 2;
    }
  }
  set_warning_sink([](const std::string& m) { std::fprintf(stderr, "warning: %s\n", m.c_str()); });
  const auto t0 = Clock::now();
  Runs run(full_scale);
  // cheap static checks first, then criteria grouped by the runs they share
  const std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, [] { chern_quantization(); }},
      {5, [] { weight_metric_law(); }},
      {11, [] { symmetric_cats(); }},
      {9, [] { projector_algebra(); }},
      {2, [&] { drift_slopes(run("fig3a")); }},
      {3, [&] { weight_identification({&run("fig3a"), &run("fig3b"), &run("fig3c")}); }},
      {4, [&] { split_fidelity({&run("fig3a"), &run("fig3b"), &run("fig3c")}); }},
      {7, [&] { oracle_equivalence({&run("fig3a"), &run("fig3c")}); }},
      {10, [&] { weight_conservation(run("fig3c")); }},
      {8, [&] { breathing(run("fig6"), run("fig3a")); }},
      {12, [&] { density_split(run("fig6")); }},
      {6, [&] { purity_tracking(run("fig5")); }},
  };
  try {
    for (const auto& [id, fn] : criteria)
      if (only.empty() || only.contains(id)) fn();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 1;
  }
  int passed = 0;
  for (const auto& [id, r] : results) {
    passed += r.first;
    std::printf("%s  [%2d] %s\n", r.first ? "PASS" : "FAIL", id, r.second.c_str());
  }
  std::printf("%d passed, %zu failed, %.0f s\n", passed, results.size() - passed, seconds_since(t0));
  return 0;
}
