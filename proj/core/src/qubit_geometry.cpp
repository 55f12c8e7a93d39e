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
#include <catpump/qubit_geometry.hpp>

#include <fftw3.h>

#include <cmath>
#include <ostream>

namespace catpump {

namespace {

constexpr double kFieldStep = 1e-5;  // finite-difference step for custom fields
constexpr double kJetStep = 1e-5;    // step for order-1 Bloch-vector derivatives

double fold(double a) {
  // (−π, π]
  a = std::remainder(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace

TwoLevelField::TwoLevelField(Kind kind, double gap, Function fn, std::string label)
    : kind_(kind), gap_(gap), fn_(std::move(fn)), label_(std::move(label)) {
  if (!(gap > 0.0)) throw ConfigError("field gap must be positive");
}

TwoLevelField TwoLevelField::bhz(double gap) { return {Kind::bhz, gap, nullptr, "bhz"}; }
TwoLevelField TwoLevelField::flat(double gap) { return {Kind::flat, gap, nullptr, "flat"}; }
TwoLevelField TwoLevelField::custom(double gap, Function fn, std::string label) {
  if (!fn) throw ConfigError("custom field needs a callable");
  return {Kind::custom, gap, std::move(fn), std::move(label)};
}

Vec3 TwoLevelField::at(const Phase2& p) const {
  const double a = 0.5 * gap_;
  switch (kind_) {
    case Kind::bhz:
      return {a * std::sin(p.phi1()), -a * std::sin(p.phi2()),
              a * (1.0 - std::cos(p.phi1()) - std::cos(p.phi2()))};
    case Kind::flat:
      return {0.0, 0.0, a};
    default:
      return fn_(p.phi1(), p.phi2());
  }
}

Vec3 TwoLevelField::derivative(const Phase2& p, int axis) const {
  const double a = 0.5 * gap_;
  switch (kind_) {
    case Kind::bhz:
      if (axis == 0) return {a * std::cos(p.phi1()), 0.0, a * std::sin(p.phi1())};
      return {0.0, -a * std::cos(p.phi2()), a * std::sin(p.phi2())};
    case Kind::flat:
      return Vec3::Zero();
    default: {
      const double d1 = axis == 0 ? kFieldStep : 0.0;
      const double d2 = axis == 1 ? kFieldStep : 0.0;
      return (at(p.shifted(d1, d2)) - at(p.shifted(-d1, -d2))) / (2.0 * kFieldStep);
    }
  }
}

std::vector<FourierTerm> TwoLevelField::fourier() const {
  const double a = 0.5 * gap_;
  const cplx I(0.0, 1.0);
  if (kind_ == Kind::flat) return {{0, 0, {0.0, 0.0, a}}};
  if (kind_ == Kind::bhz) {
    return {
        {0, 0, {0.0, 0.0, a}},
        {1, 0, {-I * a / 2.0, 0.0, -a / 2.0}},
        {-1, 0, {I * a / 2.0, 0.0, -a / 2.0}},
        {0, 1, {0.0, I * a / 2.0, -a / 2.0}},
        {0, -1, {0.0, -I * a / 2.0, -a / 2.0}},
    };
  }

  constexpr int M = 64;
  std::array<std::vector<cplx>, 3> data;
  for (auto& d : data) d.resize(M * M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const Vec3 h = at(Phase2(kTwoPi * i / M, kTwoPi * j / M));
      for (int c = 0; c < 3; ++c) data[c][i * M + j] = h[c];
    }
  }
  for (auto& d : data) {
    auto* buf = reinterpret_cast<fftw_complex*>(d.data());
    fftw_plan plan = fftw_plan_dft_2d(M, M, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  std::vector<FourierTerm> terms;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      FourierTerm t{i < M / 2 ? i : i - M, j < M / 2 ? j : j - M, {}};
      bool keep = false;
      for (int c = 0; c < 3; ++c) {
        t.c[c] = data[c][i * M + j] / double(M * M);
        if (std::abs(t.c[c]) < 1e-12) t.c[c] = 0.0;
        keep = keep || t.c[c] != 0.0;
      }
      if (keep) terms.push_back(t);
    }
  }
  return terms;
}

Spinor spinor_from_bloch(const Vec3& n) {
  Spinor s;
  if (n.z() >= 0.0) {
    s << 1.0 + n.z(), cplx(n.x(), n.y());
  } else {
    s << cplx(n.x(), -n.y()), 1.0 - n.z();
  }
  return s / s.norm();
}

EigenSystem eigensystem_at(const TwoLevelField& model, const Phase2& phi) {
  const Vec3 h = model.at(phi);
  const double r = h.norm();
  if (r < 1e-12 * model.gap()) throw GaplessPoint("field vanishes at the requested phase");
  EigenSystem es;
  es.e_minus = -r;
  es.e_plus = r;
  es.b_plus = h / r;
  es.b_minus = -es.b_plus;
  es.v_minus = spinor_from_bloch(es.b_minus);
  es.v_plus = spinor_from_bloch(es.b_plus);
  return es;
}

namespace {

struct Frame {
  EigenSystem es;
  Vec3 hhat;
  std::array<Vec3, 2> dhhat;
};

Frame frame_at(const TwoLevelField& model, const Phase2& phi) {
  Frame f;
  f.es = eigensystem_at(model, phi);
  const Vec3 h = model.at(phi);
  const double r = h.norm();
  f.hhat = h / r;
  for (int i = 0; i < 2; ++i) {
    const Vec3 dh = model.derivative(phi, i);
    f.dhhat[i] = (dh - f.hhat * f.hhat.dot(dh)) / r;
  }
  return f;
}

Spinor first_order(const Frame& f, const Frequencies& w, Band band) {
  const int nu = sign(band);
  const Band mu = other(band);
  const Vec3 v = (w.omega1 * f.dhhat[0] + w.omega2 * f.dhhat[1]) * (0.5 * nu);
  const Mat2 x = cplx(0.0, -1.0) * dot_sigma(v);
  const Spinor& pm = f.es.vector(mu);
  const cplx amp = pm.dot(x * f.es.vector(band));  // Eigen's dot conjugates the left side
  return pm * (amp / (f.es.energy(mu) - f.es.energy(band)));
}

}  // namespace

DressedState dressed_state(const TwoLevelField& model, const Phase2& phi, const Frequencies& w,
                           Band band, int order) {
  if (order != 0 && order != 1) throw ConfigError("dressed states exist at order 0 or 1 only");
  const Frame f = frame_at(model, phi);
  DressedState d;
  d.band = band;
  d.order = order;
  d.phi = phi;
  d.psi = f.es.vector(band);
  d.energy = f.es.energy(band);
  if (order == 1) {
    const Spinor c = first_order(f, w, band);
    d.correction = c.norm();
    d.psi = (d.psi + c).normalized();
    const Mat2 h = dot_sigma(model.at(phi));
    d.energy = d.psi.dot(h * d.psi).real();
  }
  return d;
}

BlochJet bloch_jet(const TwoLevelField& model, const Phase2& phi, const Frequencies& w, Band band,
                   int order) {
  BlochJet j;
  if (order == 0) {
    const Frame f = frame_at(model, phi);
    const double nu = sign(band);
    j.b = nu * f.hhat;
    j.d1 = nu * f.dhhat[0];
    j.d2 = nu * f.dhhat[1];
    return j;
  }
  auto b = [&](double d1, double d2) {
    return dressed_state(model, phi.shifted(d1, d2), w, band, order).bloch();
  };
  j.b = b(0.0, 0.0);
  j.d1 = (b(kJetStep, 0.0) - b(-kJetStep, 0.0)) / (2.0 * kJetStep);
  j.d2 = (b(0.0, kJetStep) - b(0.0, -kJetStep)) / (2.0 * kJetStep);
  return j;
}

std::array<double, 3> metric_from_jet(const BlochJet& j) {
  return {0.25 * j.d1.dot(j.d1), 0.25 * j.d1.dot(j.d2), 0.25 * j.d2.dot(j.d2)};
}

double curvature_from_jet(const BlochJet& j, Band) {
  // Each band's jet carries its own Bloch vector, so one formula serves both.
  return -0.5 * j.b.dot(j.d1.cross(j.d2));
}

int GeometryMap::index(int i, int j) const {
  i = ((i % m1_) + m1_) % m1_;
  j = ((j % m2_) + m2_) % m2_;
  return i * m2_ + j;
}

Phase2 GeometryMap::point(int i, int j) const {
  return {kTwoPi * i / m1_, kTwoPi * j / m2_};
}

std::vector<double> plaquette_fluxes(const std::vector<Spinor>& s, int m1, int m2) {
  auto idx = [&](int i, int j) { return ((i + m1) % m1) * m2 + ((j + m2) % m2); };
  std::vector<double> flux(std::size_t(m1) * m2);
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) {
      const cplx u1 = s[idx(i, j)].dot(s[idx(i + 1, j)]);
      const cplx u2 = s[idx(i + 1, j)].dot(s[idx(i + 1, j + 1)]);
      const cplx u3 = s[idx(i + 1, j + 1)].dot(s[idx(i, j + 1)]);
      const cplx u4 = s[idx(i, j + 1)].dot(s[idx(i, j)]);
      // arg of the loop product is minus the enclosed flux of F = ∂1A2 − ∂2A1
      flux[idx(i, j)] = -fold(std::arg(u1 * u2 * u3 * u4));
    }
  }
  return flux;
}

GeometryMap geometry_map(const TwoLevelField& model, const Frequencies& w, int order, int m1,
                         int m2) {
  if (m1 < 8 || m2 < 8) throw ConfigError("geometry grid needs at least 8 points per axis");
  GeometryMap map(m1, m2);
  map.order = order;
  map.omega = w;
  const std::size_t n = std::size_t(m1) * m2;
  for (Band band : {Band::minus, Band::plus}) {
    auto& bd = map.band(band);
    bd.energy.resize(n);
    bd.bloch.resize(n);
    bd.curvature.resize(n);
    bd.g.resize(n);
    std::vector<Spinor> states(n);
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        const int k = map.index(i, j);
        const Phase2 p = map.point(i, j);
        const DressedState d = dressed_state(model, p, w, band, order);
        states[k] = d.psi;
        bd.energy[k] = d.energy;
        const BlochJet jet = bloch_jet(model, p, w, band, order);
        bd.bloch[k] = jet.b;
        bd.g[k] = metric_from_jet(jet);
        bd.curvature[k] = curvature_from_jet(jet, band);
      }
    }
    bd.plaquette_flux = plaquette_fluxes(states, m1, m2);
  }
  return map;
}

int chern_number(const GeometryMap& map, Band band) {
  double total = 0.0;
  for (double f : map.band(band).plaquette_flux) total += f;
  return static_cast<int>(std::lround(total / kTwoPi));
}

namespace {

// Pattern search for a local maximum of f, starting at a grid point.
double refine_max(const std::function<double(double, double)>& f, double x, double y,
                  double step) {
  double best = f(x, y);
  while (step > 1e-12) {
    bool moved = false;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double v = f(x + dx * step, y + dy * step);
      if (v > best) {
        best = v;
        x += dx * step;
        y += dy * step;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

BandEdges band_edges(const TwoLevelField& model, int grid) {
  auto norm_h = [&](double a, double b) { return model.at(Phase2(a, b)).norm(); };
  double rmin = 1e300, rmax = -1.0;
  int imin = 0, jmin = 0, imax = 0, jmax = 0;
  const double h = kTwoPi / grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double r = norm_h(i * h, j * h);
      if (r < rmin) rmin = r, imin = i, jmin = j;
      if (r > rmax) rmax = r, imax = i, jmax = j;
    }
  }
  if (rmin < 1e-12 * model.gap()) throw GaplessPoint("field closes its gap on the band-edge grid");
  rmin = -refine_max([&](double a, double b) { return -norm_h(a, b); }, imin * h, jmin * h, h);
  rmax = refine_max(norm_h, imax * h, jmax * h, h);
  return {-rmin, rmin, -rmax, rmax};
}

double transport_phase(const TwoLevelField& model, const Frequencies& w, Band band, int order,
                       const Phase2& phi0, double t, int steps) {
  if (t == 0.0) return 0.0;
  if (steps % 2) ++steps;
  const double dt = t / steps;
  double dynamical = 0.0;
  double geometric = 0.0;
  Spinor prev;
  for (int k = 0; k <= steps; ++k) {
    const double tk = k * dt;
    const DressedState d =
        dressed_state(model, phi0.shifted(-w.omega1 * tk, -w.omega2 * tk), w, band, order);
    const double simpson = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    dynamical -= simpson * d.energy * dt / 3.0;
    if (k > 0) geometric -= std::arg(prev.dot(d.psi));
    prev = d.psi;
  }
  return fold(dynamical + geometric);
}

void write_geometry_csv(std::ostream& out, const GeometryMap& map) {
  CsvWriter csv(out, {"phi1", "phi2", "E_minus", "E_plus", "F_minus", "g11", "g12", "g22"});
  const auto& m = map.band(Band::minus);
  const auto& p = map.band(Band::plus);
  for (int i = 0; i < map.m1(); ++i) {
    for (int j = 0; j < map.m2(); ++j) {
      const int k = map.index(i, j);
      const Phase2 ph = map.point(i, j);
      csv.row({ph.phi1(), ph.phi2(), m.energy[k], p.energy[k], m.curvature[k], m.g[k][0], m.g[k][1],
               m.g[k][2]});
    }
  }
}

}  // namespace catpump
