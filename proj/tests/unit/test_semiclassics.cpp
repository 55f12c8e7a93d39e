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
#include <catpump/semiclassics.hpp>

#include <doctest.h>

#include <random>
#include <sstream>

using namespace catpump;

namespace {

const Frequencies kOmega{0.15, 0.15 * kGoldenRatio};
const double kT1 = kOmega.period1();
const TwoLevelField kBhz = TwoLevelField::bhz(2.0);

const GeometryMap& bhz_map() {
  static const GeometryMap m = geometry_map(kBhz, kOmega, 0, 128, 128);
  return m;
}

std::vector<double> grid_times(double t_max, int per_period) {
  std::vector<double> t;
  for (int k = 0; k <= std::lround(t_max * per_period); ++k) t.push_back(k * kT1 / per_period);
  return t;
}

double perp(double n1, double n2) {
  return (-kOmega.omega2 * n1 + kOmega.omega1 * n2) / kOmega.norm();
}

}  // namespace

TEST_CASE("band splines reproduce the grid and the analytic energy") {
  const BandSplines s(bhz_map(), Band::minus);
  CHECK(s.chern() == 1);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int n = 0; n < 20; ++n) {
    const double a = u(rng), b = u(rng);
    const auto e = s.energy(a, b);
    CHECK(std::abs(e.f + kBhz.at(Phase2(a, b)).norm()) < 1e-6);
    const Vec3 h = kBhz.at(Phase2(a, b));
    CHECK(std::abs(e.fx + h.dot(kBhz.derivative(Phase2(a, b), 0)) / h.norm()) < 1e-4);
  }
}

TEST_CASE("flat field trajectories do not move") {
  const GeometryMap m = geometry_map(TwoLevelField::flat(2.0), kOmega, 1, 32, 32);
  const ClassicalTrajectory tr = classical_trajectory(m, Band::minus, Phase2(0.3, 0.2), grid_times(3, 4));
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(std::abs(tr.n1[k]) < 1e-12);
    CHECK(std::abs(tr.n2[k]) < 1e-12);
  }
}

TEST_CASE("trajectories obey energy conservation") {
  const BandSplines s(bhz_map(), Band::minus);
  const Phase2 p0(0.7, 2.1);
  const ClassicalTrajectory tr = classical_trajectory(s, p0, grid_times(10, 8));
  const double tol = 1e-6 * 2.0 / kOmega.norm();
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    const double de = s.energy(p0.phi1(), p0.phi2()).f -
                      s.energy(p0.phi1() - kOmega.omega1 * t, p0.phi2() - kOmega.omega2 * t).f;
    CHECK(std::abs(tr.ne[k] - de / kOmega.norm()) < tol);
    CHECK(tr.nperp[k] == doctest::Approx(perp(tr.n1[k], tr.n2[k])));
  }
}

TEST_CASE("quadrature converges under step halving") {
  const BandSplines s(bhz_map(), Band::minus);
  const auto t = grid_times(10, 4);
  const ClassicalTrajectory a = classical_trajectory(s, Phase2(1.0, 0.4), t, kT1 / 400);
  const ClassicalTrajectory b = classical_trajectory(s, Phase2(1.0, 0.4), t, kT1 / 800);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(std::abs(a.n1[k] - b.n1[k]) < 1e-8);
    CHECK(std::abs(a.n2[k] - b.n2[k]) < 1e-8);
  }
}

TEST_CASE("transverse drift averages to the chern value") {
  const BandSplines s(bhz_map(), Band::minus);
  const double chern_slope = -kOmega.norm() / kOmega.omega1;  // quanta per T1, C = 1
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  {
    const auto t = grid_times(30, 4);
    std::vector<double> x;
    for (double q : t) x.push_back(q / kT1);
    const ClassicalTrajectory tr = classical_trajectory(s, Phase2(u(rng), u(rng)), t);
    CHECK(std::abs(fit_slope(x, tr.nperp) / chern_slope - 1.0) < 0.03);
  }
  // long horizon: independent of the starting phase
  const auto t = grid_times(100, 4);
  std::vector<double> x;
  for (double q : t) x.push_back(q / kT1);
  double lo = 1e9, hi = -1e9;
  for (int n = 0; n < 10; ++n) {
    const ClassicalTrajectory tr = classical_trajectory(s, Phase2(u(rng), u(rng)), t);
    const double sl = fit_slope(x, tr.nperp);
    lo = std::min(lo, sl);
    hi = std::max(hi, sl);
  }
  CHECK((hi - lo) / std::abs(chern_slope) < 0.01);
}

TEST_CASE("phase-averaged moments: uniform and delta densities") {
  const BandSplines s(bhz_map(), Band::minus);
  const int m = 64;
  const auto t = grid_times(3, 2);
  const MomentPrediction uni = phase_averaged_moments(s, std::vector<double>(m * m, 1.0), m, t);
  const double ue1 = kOmega.omega1 / kOmega.norm(), ue2 = kOmega.omega2 / kOmega.norm();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double want = -kOmega.norm() * t[k] / kTwoPi;
    CHECK(std::abs(uni.mean_along(k, -ue2, ue1) - want) < 1e-6 * (1.0 + std::abs(want)));
    CHECK(std::abs(uni.mean_along(k, ue1, ue2)) < 1e-6);
  }
  std::vector<double> delta(m * m, 0.0);
  delta[10 * m + 37] = 3.0;
  const MomentPrediction d = phase_averaged_moments(s, delta, m, t);
  const ClassicalTrajectory tr = classical_trajectory(s, Phase2(kTwoPi * 10 / m, kTwoPi * 37 / m), t);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(d.mean1[k] == doctest::Approx(tr.n1[k]).epsilon(1e-12));
    CHECK(d.mean2[k] == doctest::Approx(tr.n2[k]).epsilon(1e-12));
    CHECK(std::abs(d.var11[k]) < 1e-10);
  }
}

TEST_CASE("spreading refocuses at quasi-periods and stays flat for narrow packets") {
  const BandSplines s(bhz_map(), Band::minus);
  const double r = kOmega.norm();
  const double u1 = -kOmega.omega2 / r, u2 = kOmega.omega1 / r;
  const auto t = grid_times(10, 8);
  auto rows_for = [&](double dn, double window) {
    auto lat = std::make_shared<const NumberLattice>(build_lattice(rotated_window(kOmega, window, window)));
    const TotalState st = separable_state(gaussian_mode(0, dn), gaussian_mode(0, dn), qubit_state(0.0), lat);
    const PhaseSpaceProjector p(lat, kBhz, kOmega, Band::minus, 0);
    return spreading_prediction(s, project(st, p).state, t, u1, u2);
  };

  const auto q = rows_for(1.0 / kTwoPi, 12);
  for (auto [lo, at] : {std::pair{3, 5}, std::pair{5, 8}}) {
    double vmax = 0, gmax = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] / kT1 <= lo + 0.25 || t[k] / kT1 >= at - 0.25) continue;
      vmax = std::max(vmax, q[k].variance);
      gmax = std::max(gmax, std::abs(q[k].metric));
    }
    const auto& row = q[std::size_t(at) * 8];
    CHECK(row.variance < 0.05 * vmax);
    CHECK(std::abs(row.metric) < 0.05 * gmax);
  }

  const auto n = rows_for(0.5 / (0.03 * kPi), 40);
  for (const auto& row : n) CHECK(std::abs(row.spread / n.front().spread - 1.0) < 0.1);
}

TEST_CASE("quasi-periods of the golden ratio and a rational ratio") {
  const auto g = quasi_periods(1.0, kGoldenRatio, 8);
  const std::vector<long> p1{1, 1, 2, 3, 5, 8}, p2{1, 2, 3, 5, 8, 13};
  REQUIRE(g.size() == p1.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i].p1 == p1[i]);
    CHECK(g[i].p2 == p2[i]);
    CHECK(g[i].period == doctest::Approx(p1[i] * kTwoPi));
    if (i > 0) CHECK(g[i].rephasing_error < g[i - 1].rephasing_error);
  }
  const auto r = quasi_periods(2.0, 3.0, 10);
  REQUIRE(!r.empty());
  CHECK(r.back().p1 == 2);
  CHECK(r.back().p2 == 3);
  CHECK(r.back().period == doctest::Approx(kPi * 2));  // 2 T1 with ω1 = 2
  CHECK(r.back().rephasing_error < 1e-12);
  std::ostringstream o;
  write_quasi_periods_json(o, g);
  CHECK(o.str().find("\"p1\": 8") != std::string::npos);
}

TEST_CASE("landau-zener timescale") {
  const AdiabaticTimescale a = adiabatic_timescale(kBhz, kOmega);
  CHECK(a.tau_over_T1 > 3100.0 / 2);
  CHECK(a.tau_over_T1 < 3100.0 * 2);
  CHECK(a.tau == doctest::Approx(a.tau_over_T1 * kT1));
  const double e1 = adiabatic_timescale(kBhz, kOmega.scaled(0.5)).epsilon;
  const double e2 = adiabatic_timescale(kBhz, kOmega.scaled(5.0)).epsilon;
  CHECK(std::abs(std::log(e2 / e1) / std::log(10.0) - 1.0) < 0.05);
  CHECK(adiabatic_timescale(kBhz, kOmega.scaled(1e-3)).tau_over_T1 > 1e100);
}

TEST_CASE("purity prediction") {
  const auto t = grid_times(10, 4);
  const GeometryMap flat = geometry_map(TwoLevelField::flat(2.0), kOmega, 0, 32, 32);
  const PurityPrediction pf = purity_prediction(BandSplines(flat, Band::minus), Phase2(), 0.2, 0.2, t);
  for (double g : pf.purity) CHECK(g == doctest::Approx(1.0));
  CHECK(pf.bound == doctest::Approx(1.0));

  const double d = 0.09 * kPi;
  const PurityPrediction p = purity_prediction(BandSplines(bhz_map(), Band::minus), Phase2(), d, d, t);
  CHECK(p.purity.front() == doctest::Approx(1.0 - 4 * d * d * 0.25).epsilon(1e-6));
  CHECK(p.bound == doctest::Approx(1.0 - d * d / kPi));
  CHECK(p.average <= p.bound + 1e-3);
}
