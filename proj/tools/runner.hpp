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

#include <catpump/adiabatic.hpp>
#include <catpump/propagation.hpp>
#include <catpump/qubit_geometry.hpp>
#include <catpump/rotor_lattice.hpp>
#include <catpump/states.hpp>

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace catpump::cli {

struct ModeSpec {
  std::string kind = "gaussian";  // gaussian | quasi_fock | fock
  int n0 = 0;
  double dn = 5.0;
  double phi0 = 0.0;

  ModeWavefunction build() const;
  /// Phase width used by the metric laws: 1/(2Δn) for Gaussians.
  double phase_width() const;
};

struct ExperimentConfig {
  std::string preset;

  std::string field = "bhz";
  double gap = 2.0;

  double omega1_over_gap = 0.075;
  double ratio = kGoldenRatio;

  double ne_max = 14.0;
  double nperp_max = 46.0;
  double nperp_center = 0.0;
  std::optional<std::array<int, 4>> box;  // n1_min, n1_max, n2_min, n2_max

  ModeSpec mode1, mode2;
  double qubit_theta = kPi / 2;
  double qubit_phi = 0.0;

  std::string method = "krylov";  // dense eigendecomposition is slow beyond dim ~2000 on one core
  double t_max_T1 = 12.0;
  int samples_per_T1 = 4;
  std::vector<double> snapshots_T1{0.0, 8.0 / 3, 16.0 / 3, 8.0, 32.0 / 3};
  int krylov_dim = 30;
  double krylov_tol = 1e-9;
  int spectral_cap = 8192;
  double boundary_warn = 1e-4;
  double boundary_abort = 1e-2;

  int projector_order = 1;
  int geometry_grid = 128;
  int phase_grid = 0;
  double t_sep_fallback_T1 = 8.0;
  double separation_threshold = 1e-3;
  std::array<double, 2> fit_window_T1{2.0, 10.0};
  int sweep_order = 0;
  std::vector<double> sweep_dphi_over_pi;
  std::vector<double> sweep_theta_over_pi;
  double sweep_theta_dphi_over_pi = 0.38;
  std::vector<std::array<double, 2>> trajectory_phases{{0.0, 0.0}};
  long max_quasi_period = 100;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  TwoLevelField model() const;
  Frequencies omega() const;
  LatticeTruncation truncation() const;
  QubitState qubit() const { return qubit_state(qubit_theta, qubit_phi); }
  PropagatorParams propagator_params() const;
  BoundaryPolicy boundary_policy() const { return {boundary_warn, boundary_abort}; }
  /// Sample grid k·T₁/samples up to t_max merged with the snapshot times (physical units).
  std::vector<double> sample_times() const;
};

const std::vector<std::string>& preset_names();
/// Throws ConfigError for unknown names.
ExperimentConfig preset_config(const std::string& name);
/// Full-size truncation: box −59..59 × −52..52, |n_E| ≤ 30, |n_perp| ≤ 50.
void apply_paper_scale(ExperimentConfig& c);

/// Overlays a JSON document. Unknown keys and wrong types raise ConfigError
/// naming the full key path.
void apply_json(ExperimentConfig& c, const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& c);
/// Rejects out-of-range physics before anything is allocated.
void validate(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

std::shared_ptr<const NumberLattice> make_lattice(const ExperimentConfig& c);
TotalState initial_state(const ExperimentConfig& c, std::shared_ptr<const NumberLattice> lat);

/// Static band weight of a separable Gaussian state of phase width Δφ.
struct WeightPoint {
  double dphi = 0.0;
  double theta = 0.0;
  double w_minus = 0.0;       // ‖P₋Ψ‖² on the lattice
  double w_predicted = 0.0;   // density-averaged Bloch overlap
  double w_metric = 0.0;      // 1 − Δφ₁²g₁₁ − Δφ₂²g₂₂ at Φ⁰ (qubit aligned with the band)
};
WeightPoint static_weight(const ExperimentConfig& c, double dphi, double theta);

nlohmann::json run_geometry(const ExperimentConfig& c, const std::filesystem::path& out);
nlohmann::json run_evolution(const ExperimentConfig& c, const std::filesystem::path& out);
nlohmann::json run_cat_analysis(const ExperimentConfig& c, const std::filesystem::path& out);
nlohmann::json run_semiclassics(const ExperimentConfig& c, const std::filesystem::path& out);
nlohmann::json run_quasiperiods(const ExperimentConfig& c, const std::filesystem::path& out);

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    const ExperimentConfig& c, double wall_seconds, const nlohmann::json& summary);

}  // namespace catpump::cli
