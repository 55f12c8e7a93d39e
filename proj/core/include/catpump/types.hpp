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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace catpump {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Spinor = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGoldenRatio = std::numbers::phi;

/// Reduce an angle to [0, 2π).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Point on the phase torus; both angles are kept in [0, 2π).
class Phase2 {
 public:
  Phase2() = default;
  Phase2(double phi1, double phi2) : phi1_(wrap_angle(phi1)), phi2_(wrap_angle(phi2)) {}

  double phi1() const { return phi1_; }
  double phi2() const { return phi2_; }
  double operator[](int i) const { return i == 0 ? phi1_ : phi2_; }

  /// Unreduced shift; the result is reduced again on construction.
  Phase2 shifted(double d1, double d2) const { return {phi1_ + d1, phi2_ + d2}; }

 private:
  double phi1_ = 0.0;
  double phi2_ = 0.0;
};

/// Angular frequencies of the two rotor modes (ħ = 1, so these are also the
/// quantum energies ħω_i).
struct Frequencies {
  double omega1 = 0.0;
  double omega2 = 0.0;

  double norm() const { return std::hypot(omega1, omega2); }
  double operator[](int i) const { return i == 0 ? omega1 : omega2; }
  Frequencies scaled(double s) const { return {omega1 * s, omega2 * s}; }
  /// Period of the first mode, the time unit of every user-facing series.
  double period1() const { return kTwoPi / omega1; }
};

/// Band index ν ∈ {−, +}.
enum class Band { minus = -1, plus = +1 };

inline int sign(Band b) { return static_cast<int>(b); }
inline Band other(Band b) { return b == Band::minus ? Band::plus : Band::minus; }
inline const char* name(Band b) { return b == Band::minus ? "minus" : "plus"; }

inline Mat2 pauli(int axis) {
  Mat2 m;
  switch (axis) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat2 dot_sigma(const Vec3& v) {
  Mat2 m;
  m << v.z(), cplx(v.x(), -v.y()), cplx(v.x(), v.y()), -v.z();
  return m;
}

/// Bloch vector of a (not necessarily normalized) spinor, divided by its norm.
inline Vec3 bloch_vector(const Spinor& s) {
  const double n = s.squaredNorm();
  const cplx c = std::conj(s(0)) * s(1);
  return Vec3(2.0 * c.real(), 2.0 * c.imag(), std::norm(s(0)) - std::norm(s(1))) / n;
}

}  // namespace catpump
