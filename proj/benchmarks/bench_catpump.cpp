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

// Hot paths of a desk-scale run: assembly, one Krylov step, the number ↔
// phase transform and the geometry map.

#include <catpump/propagation.hpp>
#include <catpump/qubit_geometry.hpp>
#include <catpump/rotor_lattice.hpp>
#include <catpump/semiclassics.hpp>
#include <catpump/states.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace catpump;

const Frequencies kOmega{0.15, 0.15 * kGoldenRatio};
const TwoLevelField kBhz = TwoLevelField::bhz(2.0);

std::shared_ptr<const NumberLattice> lattice(double ne, double np) {
  return std::make_shared<const NumberLattice>(build_lattice(rotated_window(kOmega, ne, np)));
}

void BM_Assemble(benchmark::State& st) {
  const auto lat = lattice(st.range(0), 2 * st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_total(*lat, kBhz, kOmega));
  st.counters["dim"] = lat->dimension();
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_KrylovStep(benchmark::State& st) {
  const auto lat = lattice(st.range(0), 2 * st.range(0));
  auto h = std::make_shared<const SparseHermitian>(assemble_total(*lat, kBhz, kOmega));
  const Propagator prop(h, kOmega, {Method::krylov});
  const TotalState s = separable_state(gaussian_mode(0, 2.0), gaussian_mode(0, 2.0), qubit_state(1.0), lat);
  const double dt = kOmega.period1() / 200;
  for (auto _ : st) benchmark::DoNotOptimize(prop.apply(s.amp, dt));
  st.counters["dim"] = lat->dimension();
}
BENCHMARK(BM_KrylovStep)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_PhaseTransform(benchmark::State& st) {
  const auto lat = lattice(14, 46);
  const TotalState s = separable_state(quasi_fock_mode(0), quasi_fock_mode(0), qubit_state(1.0), lat);
  const auto& t = lat->truncation();
  PhaseTransform pt(lat, fft_size_at_least(std::max(t.n1_max - t.n1_min, t.n2_max - t.n2_min) + 1 + 48));
  std::vector<cplx> up, dn;
  for (auto _ : st) {
    pt.to_phase(s.amp, up, dn);
    benchmark::DoNotOptimize(up.data());
  }
  st.counters["grid"] = pt.m();
}
BENCHMARK(BM_PhaseTransform)->Unit(benchmark::kMillisecond);

void BM_GeometryMap(benchmark::State& st) {
  const int m = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(geometry_map(kBhz, kOmega, 1, m, m));
}
BENCHMARK(BM_GeometryMap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& st) {
  const BandSplines s(geometry_map(kBhz, kOmega, 1, 128, 128), Band::minus);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(k * kOmega.period1() / 4);
  for (auto _ : st) benchmark::DoNotOptimize(classical_trajectory(s, Phase2(0.3, 1.1), times));
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
