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

#include <vector>

namespace catpump {

/// C² periodic bicubic spline on a uniform M1×M2 grid over [0, 2π)².
/// Node slopes come from the cyclic cubic-spline system along each axis,
/// cells are Hermite bicubic patches.
class PeriodicSpline2D {
 public:
  PeriodicSpline2D() = default;
  /// values in row-major order: index i*m2 + j for (φ1_i, φ2_j).
  PeriodicSpline2D(int m1, int m2, std::vector<double> values);

  struct Jet {
    double f = 0.0;
    double fx = 0.0;
    double fy = 0.0;
  };

  int m1() const { return m1_; }
  int m2() const { return m2_; }

  /// Cell and Hermite weights at a point; shareable between splines on the same grid.
  struct Stencil {
    int k[2][2];
    double bt[4], dbt[4], bu[4], dbu[4];
  };
  Stencil locate(double x, double y) const;

  double operator()(double x, double y) const { return value(locate(x, y)); }
  Jet eval(double x, double y) const { return eval(locate(x, y)); }
  Jet eval(const Stencil& s) const;
  double value(const Stencil& s) const;

 private:
  int m1_ = 0;
  int m2_ = 0;
  double h1_ = 0.0;
  double h2_ = 0.0;
  std::vector<double> f_, fx_, fy_, fxy_;
};

}  // namespace catpump
