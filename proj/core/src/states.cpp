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
#include <catpump/states.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace catpump {

cplx ModeWavefunction::at(int n) const {
  if (n < n_min || n > n_max()) return 0.0;
  return amp[n - n_min];
}

double ModeWavefunction::mean_number() const {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    s += (n_min + double(i)) * std::norm(amp[i]);
    w += std::norm(amp[i]);
  }
  return s / w;
}

double ModeWavefunction::number_std() const {
  const double mu = mean_number();
  double v = 0.0, w = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double d = n_min + double(i) - mu;
    v += d * d * std::norm(amp[i]);
    w += std::norm(amp[i]);
  }
  return std::sqrt(v / w);
}

cplx ModeWavefunction::phase_moment() const {
  cplx s = 0.0;
  for (std::size_t i = 0; i + 1 < amp.size(); ++i) s += std::conj(amp[i]) * amp[i + 1];
  return s;
}

double ModeWavefunction::circular_phase_spread() const {
  const double r = std::abs(phase_moment());
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(-2.0 * std::log(std::min(r, 1.0)));
}

ModeWavefunction fock_mode(int n0) {
  ModeWavefunction m;
  m.n_min = n0;
  m.amp = {1.0};
  m.n0 = n0;
  return m;
}

ModeWavefunction gaussian_mode(int n0, double dn, double phi0) {
  if (!std::isfinite(dn) || dn < 0.0) throw ConfigError("number width must be a finite non-negative value");
  if (dn < 1e-3) {
    ModeWavefunction f = fock_mode(n0);
    f.phi0 = phi0;
    return f;
  }
  const int half = static_cast<int>(std::ceil(10.0 * dn)) + 2;
  ModeWavefunction m;
  m.n_min = n0 - half;
  m.n0 = n0;
  m.dn = dn;
  m.phi0 = phi0;
  m.amp.resize(2 * half + 1);
  double norm = 0.0;
  int support = 0;
  for (int i = 0; i <= 2 * half; ++i) {
    const int n = m.n_min + i;
    const double d = n - n0;
    const double a = std::exp(-d * d / (4.0 * dn * dn));
    m.amp[i] = a * std::polar(1.0, n * phi0);
    norm += a * a;
    if (a > 1e-150) ++support;
  }
  if (support == 1 && dn > 0.35)
    throw WidthTooSmall("gaussian mode collapsed onto a single number state");
  for (auto& c : m.amp) c /= std::sqrt(norm);
  return m;
}

ModeWavefunction quasi_fock_mode(int n0) { return gaussian_mode(n0, 1.0 / kTwoPi, 0.0); }

QubitState qubit_state(double theta, double phi) {
  QubitState q;
  q.amp << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  return q;
}

TotalState separable_state(const ModeWavefunction& m1, const ModeWavefunction& m2,
                           const QubitState& q, std::shared_ptr<const NumberLattice> lattice) {
  TotalState s;
  s.lattice = lattice;
  s.amp = Eigen::VectorXcd::Zero(lattice->dimension());
  const Spinor qa = q.amp.normalized();
  for (int k = 0; k < lattice->size(); ++k) {
    const auto [a, b] = lattice->site(k);
    const cplx c = m1.at(a) * m2.at(b);
    s.amp(2 * k) = c * qa(0);
    s.amp(2 * k + 1) = c * qa(1);
  }
  double n1 = 0.0, n2 = 0.0;
  for (auto c : m1.amp) n1 += std::norm(c);
  for (auto c : m2.amp) n2 += std::norm(c);
  const double kept = s.amp.squaredNorm();
  s.mass_loss = std::max(0.0, 1.0 - kept / (n1 * n2));
  if (s.mass_loss >= 1e-6)
    throw TruncationLoss("initial state loses " + fmt(s.mass_loss) + " of its mass to truncation");
  if (kept <= 0.0) throw ZeroState("initial state has no support on the lattice");
  s.amp /= std::sqrt(kept);
  return s;
}

double PhaseAmplitudeMap::total_weight() const {
  double s = 0.0;
  for (std::size_t k = 0; k < up.size(); ++k) s += density(static_cast<int>(k));
  return s * cell();
}

double PhaseAmplitudeMap::band_weight() const {
  double s = 0.0;
  for (auto c : band) s += std::norm(c);
  return s * cell();
}

const char* fft_library_version() { return fftw_version; }

int fft_size_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

PhaseTransform::PhaseTransform(std::shared_ptr<const NumberLattice> lattice, int m)
    : lat_(std::move(lattice)), m_(m) {
  const auto& t = lat_->truncation();
  if (m < t.n1_max - t.n1_min + 1 || m < t.n2_max - t.n2_min + 1)
    throw ConfigError("phase grid is narrower than the lattice box");
  buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * m * m));
  auto* b = reinterpret_cast<fftw_complex*>(buf_);
  fwd_ = fftw_plan_dft_2d(m, m, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(m, m, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  slot_.resize(lat_->size());
  for (int k = 0; k < lat_->size(); ++k) {
    const auto [a, c] = lat_->site(k);
    slot_[k] = ((a % m + m) % m) * m + ((c % m + m) % m);
  }
}

PhaseTransform::~PhaseTransform() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void PhaseTransform::to_phase(const Eigen::VectorXcd& amp, std::vector<cplx>& up,
                              std::vector<cplx>& down) {
  const std::size_t n = std::size_t(m_) * m_;
  const double scale = 1.0 / kTwoPi;
  for (int s = 0; s < 2; ++s) {
    std::fill(buf_, buf_ + n, cplx(0.0));
    for (std::size_t k = 0; k < slot_.size(); ++k) buf_[slot_[k]] = amp(2 * k + s);
    fftw_execute(static_cast<fftw_plan>(fwd_));
    auto& out = s == 0 ? up : down;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf_[i] * scale;
  }
}

Eigen::VectorXcd PhaseTransform::to_number(const std::vector<cplx>& up,
                                           const std::vector<cplx>& down) {
  const std::size_t n = std::size_t(m_) * m_;
  const double scale = kTwoPi / double(n);
  Eigen::VectorXcd amp(lat_->dimension());
  for (int s = 0; s < 2; ++s) {
    const auto& in = s == 0 ? up : down;
    std::copy(in.begin(), in.end(), buf_);
    fftw_execute(static_cast<fftw_plan>(bwd_));
    for (std::size_t k = 0; k < slot_.size(); ++k) amp(2 * k + s) = buf_[slot_[k]] * scale;
  }
  return amp;
}

PhaseAmplitudeMap phase_amplitude(const TotalState& state, int m,
                                  const std::optional<BandResolution>& band) {
  PhaseAmplitudeMap map;
  map.m = m;
  PhaseTransform tr(state.lattice, m);
  tr.to_phase(state.amp, map.up, map.down);
  if (band) {
    if (!band->model) throw ConfigError("band resolution needs a field");
    map.band.resize(map.up.size());
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const int k = map.index(i, j);
        const Phase2 p(kTwoPi * i / m, kTwoPi * j / m);
        const Spinor v = dressed_state(*band->model, p, band->omega, band->band, band->order).psi;
        map.band[k] = std::conj(v(0)) * map.up[k] + std::conj(v(1)) * map.down[k];
      }
    }
  }
  return map;
}

void write_state_csv(std::ostream& out, const TotalState& state) {
  CsvWriter csv(out, {"n1", "n2", "re_up", "im_up", "re_dn", "im_dn"});
  for (int k = 0; k < state.lattice->size(); ++k) {
    const auto [a, b] = state.lattice->site(k);
    const cplx u = state.up(k), d = state.down(k);
    csv.row({double(a), double(b), u.real(), u.imag(), d.real(), d.imag()});
  }
}

void write_phase_map_csv(std::ostream& out, const PhaseAmplitudeMap& map, bool density_only) {
  const bool banded = !map.band.empty();
  if (density_only) {
    CsvWriter csv(out, {"phi1", "phi2", "density"});
    for (int i = 0; i < map.m; ++i)
      for (int j = 0; j < map.m; ++j) {
        const int k = map.index(i, j);
        csv.row({kTwoPi * i / map.m, kTwoPi * j / map.m,
                 banded ? map.band_density(k) : map.density(k)});
      }
    return;
  }
  if (banded) {
    CsvWriter csv(out, {"phi1", "phi2", "re", "im"});
    for (int i = 0; i < map.m; ++i)
      for (int j = 0; j < map.m; ++j) {
        const cplx c = map.band[map.index(i, j)];
        csv.row({kTwoPi * i / map.m, kTwoPi * j / map.m, c.real(), c.imag()});
      }
    return;
  }
  CsvWriter csv(out, {"phi1", "phi2", "re_up", "im_up", "re_dn", "im_dn"});
  for (int i = 0; i < map.m; ++i)
    for (int j = 0; j < map.m; ++j) {
      const int k = map.index(i, j);
      csv.row({kTwoPi * i / map.m, kTwoPi * j / map.m, map.up[k].real(), map.up[k].imag(),
               map.down[k].real(), map.down[k].imag()});
    }
}

}  // namespace catpump
