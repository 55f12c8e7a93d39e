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
#include <catpump/states.hpp>

#include <doctest.h>

#include <sstream>

using namespace catpump;

namespace {

const Frequencies kOmega{0.15, 0.15 * kGoldenRatio};

std::shared_ptr<const NumberLattice> window(double ne, double np) {
  return std::make_shared<const NumberLattice>(build_lattice(rotated_window(kOmega, ne, np)));
}

}  // namespace

TEST_CASE("gaussian mode widths") {
  const ModeWavefunction m = gaussian_mode(3, 5.0, 0.0);
  CHECK(m.mean_number() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(m.number_std() - 5.0) < 0.1);
  CHECK(std::abs(m.circular_phase_spread() - 0.1) < 0.005);
  double norm = 0;
  for (auto a : m.amp) norm += std::norm(a);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian modes are near minimum uncertainty") {
  for (double dn : {0.5, 0.7, 1.0, 2.0, 5.0, 10.0}) {
    const ModeWavefunction m = gaussian_mode(0, dn);
    CHECK(m.number_std() * m.circular_phase_spread() >= 0.475);
  }
}

TEST_CASE("phase offset pi alternates the sign") {
  const ModeWavefunction a = gaussian_mode(0, 2.0, 0.0), b = gaussian_mode(0, 2.0, kPi);
  for (int n = -6; n <= 6; ++n)
    CHECK(std::abs(b.at(n) - (n % 2 ? -1.0 : 1.0) * a.at(n)) < 1e-14);
}

TEST_CASE("quasi-fock and fock support") {
  const ModeWavefunction q = quasi_fock_mode(2);
  CHECK(std::norm(q.at(2)) > 1.0 - 1e-8);
  CHECK(std::norm(q.at(3)) < 1e-8);
  const ModeWavefunction f = fock_mode(-4);
  CHECK(f.amp.size() == 1);
  CHECK(f.at(-4) == cplx(1.0));
  CHECK(gaussian_mode(1, 0.0).amp.size() == 1);
  CHECK_THROWS_AS(gaussian_mode(0, -1.0), ConfigError);
}

TEST_CASE("separable state is normalized and reports truncation loss") {
  const auto lat = window(20, 20);
  const TotalState s =
      separable_state(gaussian_mode(0, 2.0), gaussian_mode(1, 2.0, 0.5), qubit_state(1.0, 0.3), lat);
  CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.mass_loss < 1e-12);
  const Vec3 q = qubit_state(1.0, 0.3).bloch();
  CHECK(q.z() == doctest::Approx(std::cos(1.0)));
  CHECK(std::atan2(q.y(), q.x()) == doctest::Approx(0.3));
  CHECK_THROWS_AS(separable_state(gaussian_mode(0, 5.0), gaussian_mode(0, 5.0), qubit_state(0), window(6, 6)),
                  TruncationLoss);
}

TEST_CASE("phase density peaks at the prepared phase") {
  const auto lat = window(24, 24);
  const TotalState s = separable_state(gaussian_mode(0, 3.0, 1.0), gaussian_mode(0, 3.0, 4.0),
                                       qubit_state(0.7), lat);
  const int m = fft_size_at_least(80);
  const PhaseAmplitudeMap p = phase_amplitude(s, m);
  int best = 0;
  for (int k = 1; k < m * m; ++k)
    if (p.density(k) > p.density(best)) best = k;
  const double h = kTwoPi / m;
  CHECK(std::abs((best / m) * h - 1.0) <= h);
  CHECK(std::abs((best % m) * h - 4.0) <= h);
  CHECK(p.total_weight() == doctest::Approx(s.norm2()).epsilon(1e-12));  // Parseval
}

TEST_CASE("phase transform round trip") {
  const auto lat = window(8, 8);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(lat->dimension());
  PhaseTransform t(lat, fft_size_at_least(40));
  std::vector<cplx> up, down;
  t.to_phase(v, up, down);
  CHECK((t.to_number(up, down) - v).norm() < 1e-12 * v.norm());
  CHECK_THROWS_AS(PhaseTransform(lat, 4), ConfigError);
}

TEST_CASE("band resolution splits the phase density") {
  const TwoLevelField f = TwoLevelField::bhz(2.0);
  const auto lat = window(12, 12);
  const TotalState s = separable_state(quasi_fock_mode(0), quasi_fock_mode(0), qubit_state(kPi / 2), lat);
  const int m = fft_size_at_least(64);
  const PhaseAmplitudeMap a = phase_amplitude(s, m, BandResolution{&f, kOmega, Band::minus, 0});
  const PhaseAmplitudeMap b = phase_amplitude(s, m, BandResolution{&f, kOmega, Band::plus, 0});
  double worst = 0.0;
  for (int k = 0; k < m * m; ++k)
    worst = std::max(worst, std::abs(a.band_density(k) + b.band_density(k) - a.density(k)));
  CHECK(worst < 1e-12);
  CHECK(a.band_weight() + b.band_weight() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fft sizes are the smallest 2-3-5 smooth bound") {
  CHECK(fft_size_at_least(1) == 1);
  CHECK(fft_size_at_least(7) == 8);
  CHECK(fft_size_at_least(97) == 100);
  CHECK(fft_size_at_least(121) == 125);
  CHECK(fft_size_at_least(128) == 128);
}

TEST_CASE("state csv lists every site") {
  const auto lat = window(3, 3);
  const TotalState s = separable_state(fock_mode(0), fock_mode(0), qubit_state(0), lat);
  std::ostringstream o;
  write_state_csv(o, s);
  const std::string out = o.str();
  CHECK(std::count(out.begin(), out.end(), '\n') == 1 + lat->size());
  CHECK(out.find("0,0,1,0,0,0\n") != std::string::npos);
}
