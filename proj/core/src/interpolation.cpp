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
#include <catpump/interpolation.hpp>
#include <catpump/types.hpp>

#include <Eigen/LU>

#include <cmath>

namespace catpump {

namespace {

// Solves m_{i−1} + 4 m_i + m_{i+1} = 3 (f_{i+1} − f_{i−1})/h on a ring for
// every column of `rhs_src` (length n each, stride given by the accessor).
class CyclicSlopes {
 public:
  CyclicSlopes(int n, double h) : n_(n), h_(h) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      a(i, i) += 4.0;
      a(i, (i + 1) % n) += 1.0;
      a(i, (i + n - 1) % n) += 1.0;
    }
    lu_ = a.partialPivLu();
  }

  Eigen::VectorXd slopes(const Eigen::VectorXd& f) const {
    Eigen::VectorXd r(n_);
    for (int i = 0; i < n_; ++i) r(i) = 3.0 * (f((i + 1) % n_) - f((i + n_ - 1) % n_)) / h_;
    return lu_.solve(r);
  }

 private:
  int n_;
  double h_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

inline void hermite(double t, double b[4], double db[4]) {
  const double t2 = t * t, t3 = t2 * t;
  b[0] = 2 * t3 - 3 * t2 + 1;  // value at 0
  b[1] = -2 * t3 + 3 * t2;     // value at 1
  b[2] = t3 - 2 * t2 + t;      // slope at 0
  b[3] = t3 - t2;              // slope at 1
  db[0] = 6 * t2 - 6 * t;
  db[1] = -6 * t2 + 6 * t;
  db[2] = 3 * t2 - 4 * t + 1;
  db[3] = 3 * t2 - 2 * t;
}

}  // namespace

PeriodicSpline2D::PeriodicSpline2D(int m1, int m2, std::vector<double> values)
    : m1_(m1), m2_(m2), h1_(kTwoPi / m1), h2_(kTwoPi / m2), f_(std::move(values)) {
  if (m1 < 3 || m2 < 3 || f_.size() != std::size_t(m1) * m2)
    throw ConfigError("spline grid is too small or does not match its data");
  const CyclicSlopes s1(m1, h1_), s2(m2, h2_);
  fx_.resize(f_.size());
  fy_.resize(f_.size());
  fxy_.resize(f_.size());
  Eigen::VectorXd col(m1), row(m2);
  for (int j = 0; j < m2; ++j) {
    for (int i = 0; i < m1; ++i) col(i) = f_[i * m2 + j];
    const Eigen::VectorXd d = s1.slopes(col);
    for (int i = 0; i < m1; ++i) fx_[i * m2 + j] = d(i);
  }
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) row(j) = f_[i * m2 + j];
    Eigen::VectorXd d = s2.slopes(row);
    for (int j = 0; j < m2; ++j) fy_[i * m2 + j] = d(j);
    for (int j = 0; j < m2; ++j) row(j) = fx_[i * m2 + j];
    d = s2.slopes(row);
    for (int j = 0; j < m2; ++j) fxy_[i * m2 + j] = d(j);
  }
}

PeriodicSpline2D::Stencil PeriodicSpline2D::locate(double x, double y) const {
  x = wrap_angle(x) / h1_;
  y = wrap_angle(y) / h2_;
  int i = static_cast<int>(std::floor(x));
  int j = static_cast<int>(std::floor(y));
  const double t = x - i, u = y - j;
  i %= m1_;
  j %= m2_;
  const int ip = (i + 1) % m1_, jp = (j + 1) % m2_;
  Stencil s{{{i * m2_ + j, i * m2_ + jp}, {ip * m2_ + j, ip * m2_ + jp}}, {}, {}, {}, {}};
  hermite(t, s.bt, s.dbt);
  hermite(u, s.bu, s.dbu);
  return s;
}

PeriodicSpline2D::Jet PeriodicSpline2D::eval(const Stencil& s) const {
  Jet r;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int k = s.k[a][b];
      const double v[4] = {f_[k], fx_[k] * h1_, fy_[k] * h2_, fxy_[k] * h1_ * h2_};
      // basis: value × value, slope_x × value, value × slope_y, slope_x × slope_y
      const double px = s.bt[a], sx = s.bt[2 + a], dpx = s.dbt[a], dsx = s.dbt[2 + a];
      const double py = s.bu[b], sy = s.bu[2 + b], dpy = s.dbu[b], dsy = s.dbu[2 + b];
      r.f += v[0] * px * py + v[1] * sx * py + v[2] * px * sy + v[3] * sx * sy;
      r.fx += v[0] * dpx * py + v[1] * dsx * py + v[2] * dpx * sy + v[3] * dsx * sy;
      r.fy += v[0] * px * dpy + v[1] * sx * dpy + v[2] * px * dsy + v[3] * sx * dsy;
    }
  }
  r.fx /= h1_;
  r.fy /= h2_;
  return r;
}

double PeriodicSpline2D::value(const Stencil& s) const {
  double r = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int k = s.k[a][b];
      const double px = s.bt[a], sx = s.bt[2 + a] * h1_;
      const double py = s.bu[b], sy = s.bu[2 + b] * h2_;
      r += f_[k] * px * py + fx_[k] * sx * py + fy_[k] * px * sy + fxy_[k] * sx * sy;
    }
  }
  return r;
}

}  // namespace catpump
