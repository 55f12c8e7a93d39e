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

#include "runner.hpp"

#include <catpump/errors.hpp>
#include <catpump/io.hpp>
#include <catpump/semiclassics.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace catpump::cli {

using nlohmann::json;
namespace fs = std::filesystem;

ModeWavefunction ModeSpec::build() const {
  if (kind == "gaussian") return gaussian_mode(n0, dn, phi0);
  if (kind == "quasi_fock") return gaussian_mode(n0, 1.0 / kTwoPi, phi0);
  if (kind == "fock") return fock_mode(n0);
  throw ConfigError("unknown mode kind '" + kind + "'");
}

double ModeSpec::phase_width() const {
  if (kind == "gaussian" && dn > 0.0) return 0.5 / dn;
  if (kind == "quasi_fock") return kPi;
  return build().circular_phase_spread();
}

TwoLevelField ExperimentConfig::model() const {
  if (field == "bhz") return TwoLevelField::bhz(gap);
  if (field == "flat") return TwoLevelField::flat(gap);
  throw ConfigError("unknown field '" + field + "'");
}

Frequencies ExperimentConfig::omega() const {
  const double w1 = omega1_over_gap * gap;
  return {w1, w1 * ratio};
}

LatticeTruncation ExperimentConfig::truncation() const {
  LatticeTruncation t = rotated_window(omega(), ne_max, nperp_max, nperp_center);
  if (box) {
    t.n1_min = std::max(t.n1_min, (*box)[0]);
    t.n1_max = std::min(t.n1_max, (*box)[1]);
    t.n2_min = std::max(t.n2_min, (*box)[2]);
    t.n2_max = std::min(t.n2_max, (*box)[3]);
  }
  return t;
}

PropagatorParams ExperimentConfig::propagator_params() const {
  PropagatorParams p;
  if (method == "automatic") p.method = Method::automatic;
  else if (method == "spectral") p.method = Method::spectral;
  else if (method == "krylov") p.method = Method::krylov;
  else throw ConfigError("unknown propagation method '" + method + "'");
  p.spectral_cap = spectral_cap;
  p.krylov_dim = krylov_dim;
  p.krylov_tol = krylov_tol;
  return p;
}

std::vector<double> ExperimentConfig::sample_times() const {
  const double t1 = omega().period1();
  std::vector<double> u;
  const int n = static_cast<int>(std::lround(t_max_T1 * samples_per_T1));
  for (int k = 0; k <= n; ++k) u.push_back(double(k) / samples_per_T1);
  for (double s : snapshots_T1)
    if (s <= t_max_T1 + 1e-12) u.push_back(s);
  std::sort(u.begin(), u.end());
  std::vector<double> t;
  for (double x : u)
    if (t.empty() || x - t.back() / t1 > 1e-9) t.push_back(x * t1);
  return t;
}

// ---------------------------------------------------------------- presets

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig3a", "fig3b", "fig3c", "fig4",
                                              "fig5",  "fig6",  "fig7",  "fig8"};
  return names;
}

namespace {

ModeSpec gaussian(double dn) { return {"gaussian", 0, dn, 0.0}; }
ModeSpec quasi_fock() { return {"quasi_fock", 0, 1.0 / kTwoPi, 0.0}; }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

}  // namespace

// Desk-scale windows keep the boundary mass near 1e−4 up to the analysis
// horizon of each preset.
ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "fig3a" || name == "fig7") {
    c.mode1 = c.mode2 = gaussian(5.0);
    c.ne_max = 30;
    c.nperp_max = 56;
  } else if (name == "fig3b") {
    c.mode1 = c.mode2 = gaussian(0.7);
    c.ne_max = 14;
    c.nperp_max = 46;
  } else if (name == "fig3c") {
    c.mode1 = c.mode2 = quasi_fock();
    c.ne_max = 13;
    c.nperp_max = 44;
  } else if (name == "fig4") {
    c.mode1 = c.mode2 = gaussian(5.0);
    c.qubit_theta = 0.0;
    c.t_max_T1 = 0.0;
    c.snapshots_T1 = {0.0};
    c.sweep_dphi_over_pi = linspace(0.02, 0.1, 9);
    for (double x : {0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0}) c.sweep_dphi_over_pi.push_back(x);
  } else if (name == "fig5") {
    c.mode1 = c.mode2 = gaussian(0.5 / (0.09 * kPi));
    c.ne_max = 16;
    c.nperp_max = 40;
    c.t_max_T1 = 10.0;
    c.samples_per_T1 = 8;
    c.fit_window_T1 = {2.0, 10.0};
  } else if (name == "fig6") {
    c.mode1 = c.mode2 = quasi_fock();
    c.ne_max = 13;
    c.nperp_max = 40;
    c.t_max_T1 = 10.0;
    c.samples_per_T1 = 8;
    c.snapshots_T1 = {0.0, 3.0, 5.0, 8.0};
  } else if (name == "fig8") {
    c.mode1 = c.mode2 = gaussian(5.0);
    c.t_max_T1 = 0.0;
    c.snapshots_T1 = {0.0};
    c.sweep_dphi_over_pi = linspace(0.05, 1.0, 20);
    c.sweep_theta_over_pi = linspace(0.0, 1.0, 9);
    c.sweep_theta_dphi_over_pi = 0.38;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

void apply_paper_scale(ExperimentConfig& c) {
  c.ne_max = 30;
  c.nperp_max = 50;
  c.nperp_center = 0;
  c.box = std::array<int, 4>{-59, 59, -52, 52};
}

// ---------------------------------------------------------------- JSON

namespace {

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError("config section '" + path_ + "' must be an object");
  }

  // Every key must be claimed by exactly one handler.
  void dispatch(const std::map<std::string, std::function<void(const json&, const std::string&)>>& h) {
    for (const auto& [key, value] : j_.items()) {
      const auto it = h.find(key);
      const std::string where = path_.empty() ? key : path_ + "." + key;
      if (it == h.end()) throw ConfigError("unknown config key '" + where + "'");
      try {
        it->second(value, where);
      } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + where + "': " + e.what());
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
};

template <class T>
auto set(T& dst) {
  return [&dst](const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("'" + where + "' must be a number");
    } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, long> ||
                         std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_integer()) throw ConfigError("'" + where + "' must be an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("'" + where + "' must be a string");
    }
    dst = v.get<T>();
  };
}

void read_mode(ModeSpec& m, const json& j, const std::string& path) {
  Section(j, path).dispatch({{"kind", set(m.kind)},
                             {"n0", set(m.n0)},
                             {"dn", set(m.dn)},
                             {"phi0", set(m.phi0)}});
}

json mode_json(const ModeSpec& m) {
  return {{"kind", m.kind}, {"n0", m.n0}, {"dn", m.dn}, {"phi0", m.phi0}};
}

}  // namespace

void apply_json(ExperimentConfig& c, const json& doc) {
  using H = std::function<void(const json&, const std::string&)>;
  Section(doc, "").dispatch({
      {"preset", set(c.preset)},
      {"model", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({{"field", set(c.field)}, {"gap", set(c.gap)}});
       })},
      {"frequencies", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch(
             {{"omega1_over_gap", set(c.omega1_over_gap)}, {"ratio", set(c.ratio)}});
       })},
      {"truncation", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({
             {"ne_max", set(c.ne_max)},
             {"nperp_max", set(c.nperp_max)},
             {"nperp_center", set(c.nperp_center)},
             {"box", H([&](const json& v, const std::string& w) {
                if (v.is_null()) {
                  c.box.reset();
                  return;
                }
                if (!v.is_array() || v.size() != 4)
                  throw ConfigError("'" + w + "' must be [n1_min, n1_max, n2_min, n2_max]");
                c.box = v.get<std::array<int, 4>>();
              })},
         });
       })},
      {"initial_state", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({
             {"mode1", H([&](const json& v, const std::string& w) { read_mode(c.mode1, v, w); })},
             {"mode2", H([&](const json& v, const std::string& w) { read_mode(c.mode2, v, w); })},
             {"qubit", H([&](const json& v, const std::string& w) {
                Section(v, w).dispatch({{"theta", set(c.qubit_theta)}, {"phi", set(c.qubit_phi)}});
              })},
         });
       })},
      {"propagation", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({
             {"method", set(c.method)},
             {"t_max_T1", set(c.t_max_T1)},
             {"samples_per_T1", set(c.samples_per_T1)},
             {"snapshots_T1", set(c.snapshots_T1)},
             {"krylov_dim", set(c.krylov_dim)},
             {"krylov_tol", set(c.krylov_tol)},
             {"spectral_cap", set(c.spectral_cap)},
             {"boundary_warn", set(c.boundary_warn)},
             {"boundary_abort", set(c.boundary_abort)},
         });
       })},
      {"analysis", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({
             {"projector_order", set(c.projector_order)},
             {"geometry_grid", set(c.geometry_grid)},
             {"phase_grid", set(c.phase_grid)},
             {"t_sep_fallback_T1", set(c.t_sep_fallback_T1)},
             {"separation_threshold", set(c.separation_threshold)},
             {"fit_window_T1", set(c.fit_window_T1)},
             {"sweep_order", set(c.sweep_order)},
             {"sweep_dphi_over_pi", set(c.sweep_dphi_over_pi)},
             {"sweep_theta_over_pi", set(c.sweep_theta_over_pi)},
             {"sweep_theta_dphi_over_pi", set(c.sweep_theta_dphi_over_pi)},
             {"trajectory_phases", set(c.trajectory_phases)},
             {"max_quasi_period", set(c.max_quasi_period)},
         });
       })},
      {"output", H([&](const json& j, const std::string& p) {
         Section(j, p).dispatch({{"directory", set(c.out_dir)}});
       })},
      {"seed", set(c.seed)},
      {"threads", set(c.threads)},
  });
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["model"] = {{"field", c.field}, {"gap", c.gap}};
  j["frequencies"] = {{"omega1_over_gap", c.omega1_over_gap}, {"ratio", c.ratio}};
  j["truncation"] = {{"ne_max", c.ne_max}, {"nperp_max", c.nperp_max},
                     {"nperp_center", c.nperp_center}};
  j["truncation"]["box"] = c.box ? json(*c.box) : json(nullptr);
  j["initial_state"] = {{"mode1", mode_json(c.mode1)},
                        {"mode2", mode_json(c.mode2)},
                        {"qubit", {{"theta", c.qubit_theta}, {"phi", c.qubit_phi}}}};
  j["propagation"] = {{"method", c.method},
                      {"t_max_T1", c.t_max_T1},
                      {"samples_per_T1", c.samples_per_T1},
                      {"snapshots_T1", c.snapshots_T1},
                      {"krylov_dim", c.krylov_dim},
                      {"krylov_tol", c.krylov_tol},
                      {"spectral_cap", c.spectral_cap},
                      {"boundary_warn", c.boundary_warn},
                      {"boundary_abort", c.boundary_abort}};
  j["analysis"] = {{"projector_order", c.projector_order},
                   {"geometry_grid", c.geometry_grid},
                   {"phase_grid", c.phase_grid},
                   {"t_sep_fallback_T1", c.t_sep_fallback_T1},
                   {"separation_threshold", c.separation_threshold},
                   {"fit_window_T1", c.fit_window_T1},
                   {"sweep_order", c.sweep_order},
                   {"sweep_dphi_over_pi", c.sweep_dphi_over_pi},
                   {"sweep_theta_over_pi", c.sweep_theta_over_pi},
                   {"sweep_theta_dphi_over_pi", c.sweep_theta_dphi_over_pi},
                   {"trajectory_phases", c.trajectory_phases},
                   {"max_quasi_period", c.max_quasi_period}};
  j["output"] = {{"directory", c.out_dir}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  auto positive = [&](double x, const char* key) {
    require(std::isfinite(x) && x > 0.0, std::string(key) + " must be positive");
  };
  require(c.field == "bhz" || c.field == "flat", "model.field must be 'bhz' or 'flat'");
  positive(c.gap, "model.gap");
  positive(c.omega1_over_gap, "frequencies.omega1_over_gap");
  require(c.omega1_over_gap < 0.5,
          "frequencies.omega1_over_gap must stay below 0.5 (modes slow against the qubit)");
  positive(c.ratio, "frequencies.ratio");
  positive(c.ne_max, "truncation.ne_max");
  positive(c.nperp_max, "truncation.nperp_max");
  require(std::isfinite(c.nperp_center), "truncation.nperp_center must be finite");
  if (c.box)
    require((*c.box)[0] <= (*c.box)[1] && (*c.box)[2] <= (*c.box)[3],
            "truncation.box must have min <= max on both axes");
  for (const ModeSpec* m : {&c.mode1, &c.mode2}) {
    require(m->kind == "gaussian" || m->kind == "quasi_fock" || m->kind == "fock",
            "mode kind must be gaussian, quasi_fock or fock");
    if (m->kind == "gaussian") positive(m->dn, "initial_state.mode.dn");
    require(std::isfinite(m->phi0), "initial_state.mode.phi0 must be finite");
  }
  require(std::isfinite(c.qubit_theta) && std::isfinite(c.qubit_phi), "qubit angles must be finite");
  require(c.method == "automatic" || c.method == "spectral" || c.method == "krylov",
          "propagation.method must be automatic, spectral or krylov");
  require(std::isfinite(c.t_max_T1) && c.t_max_T1 >= 0.0, "propagation.t_max_T1 must be >= 0");
  require(c.samples_per_T1 >= 1, "propagation.samples_per_T1 must be >= 1");
  for (double s : c.snapshots_T1)
    require(std::isfinite(s) && s >= 0.0, "propagation.snapshots_T1 entries must be >= 0");
  require(c.krylov_dim >= 2, "propagation.krylov_dim must be >= 2");
  positive(c.krylov_tol, "propagation.krylov_tol");
  require(c.spectral_cap >= 1, "propagation.spectral_cap must be >= 1");
  positive(c.boundary_warn, "propagation.boundary_warn");
  require(c.boundary_abort >= c.boundary_warn, "propagation.boundary_abort must be >= boundary_warn");
  require(c.projector_order == 0 || c.projector_order == 1, "analysis.projector_order must be 0 or 1");
  require(c.sweep_order == 0 || c.sweep_order == 1, "analysis.sweep_order must be 0 or 1");
  require(c.geometry_grid >= 8, "analysis.geometry_grid must be >= 8");
  require(c.phase_grid >= 0, "analysis.phase_grid must be >= 0");
  positive(c.t_sep_fallback_T1, "analysis.t_sep_fallback_T1");
  positive(c.separation_threshold, "analysis.separation_threshold");
  require(c.fit_window_T1[0] < c.fit_window_T1[1], "analysis.fit_window_T1 must be increasing");
  for (double d : c.sweep_dphi_over_pi)
    require(d > 0.0 && d <= 1.0, "analysis.sweep_dphi_over_pi entries must lie in (0, 1]");
  require(c.sweep_theta_dphi_over_pi > 0.0 && c.sweep_theta_dphi_over_pi <= 1.0,
          "analysis.sweep_theta_dphi_over_pi must lie in (0, 1]");
  require(c.max_quasi_period >= 1, "analysis.max_quasi_period must be >= 1");
  require(!c.out_dir.empty(), "output.directory must not be empty");
  require(c.threads >= 1, "threads must be >= 1");
}

std::string config_hash(const ExperimentConfig& c) {
  // FNV-1a over the canonical dump; stable across platforms.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

// ---------------------------------------------------------------- runs

std::shared_ptr<const NumberLattice> make_lattice(const ExperimentConfig& c) {
  return std::make_shared<const NumberLattice>(build_lattice(c.truncation()));
}

TotalState initial_state(const ExperimentConfig& c, std::shared_ptr<const NumberLattice> lat) {
  return separable_state(c.mode1.build(), c.mode2.build(), c.qubit(), std::move(lat));
}

namespace {

// Floats in JSON artifacts carry 12 significant digits like the CSVs.
json rounded(json j) {
  if (j.is_number_float()) return std::stod(fmt(j.get<double>()));
  if (j.is_structured())
    for (auto& v : j) v = rounded(v);
  return j;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

int phase_grid_for(const ExperimentConfig& c, const NumberLattice& lat) {
  if (c.phase_grid > 0) return c.phase_grid;
  const auto& t = lat.truncation();
  return fft_size_at_least(std::max(t.n1_max - t.n1_min, t.n2_max - t.n2_min) + 1 + 48);
}

}  // namespace

WeightPoint static_weight(const ExperimentConfig& c, double dphi, double theta) {
  const TwoLevelField model = c.model();
  const Frequencies w = c.omega();
  const double dn = 0.5 / dphi;
  const double r = std::max(8.0, std::ceil(6.5 * dn) + 3.0);
  auto lat = std::make_shared<const NumberLattice>(build_lattice(rotated_window(w, r, r)));
  const TotalState s = separable_state(gaussian_mode(0, dn, c.mode1.phi0),
                                       gaussian_mode(0, dn, c.mode2.phi0),
                                       qubit_state(theta, c.qubit_phi), lat);
  const PhaseSpaceProjector p(lat, model, w, Band::minus, c.sweep_order, c.phase_grid);
  WeightPoint out;
  out.dphi = dphi;
  out.theta = theta;
  out.w_minus = project(s, p).weight / s.norm2();

  const int m = p.grid();
  const PhaseAmplitudeMap pm = phase_amplitude(s, m);
  const GeometryMap gm = geometry_map(model, w, c.sweep_order, m, m);
  std::vector<double> density(pm.up.size());
  for (std::size_t k = 0; k < density.size(); ++k) density[k] = pm.density(int(k));
  out.w_predicted =
      predicted_weight(density, pm.cell(), gm.band(Band::minus).bloch, qubit_state(theta, c.qubit_phi).bloch());

  const Phase2 phi0(c.mode1.phi0, c.mode2.phi0);
  const auto g = metric_from_jet(bloch_jet(model, phi0, w, Band::minus, c.sweep_order));
  out.w_metric = 1.0 - dphi * dphi * (g[0] + g[2]);
  return out;
}

json run_geometry(const ExperimentConfig& c, const fs::path& out) {
  const TwoLevelField model = c.model();
  const Frequencies w = c.omega();
  const GeometryMap map =
      geometry_map(model, w, c.projector_order, c.geometry_grid, c.geometry_grid);
  const int cm = chern_number(map, Band::minus), cp = chern_number(map, Band::plus);
  {
    auto f = open_out(out / "geometry.csv");
    write_geometry_csv(f, map);
  }
  {
    auto f = open_out(out / "chern.json");
    f << json{{"C_minus", cm}, {"C_plus", cp}}.dump(2) << "\n";
  }
  const BandEdges e = band_edges(model, c.geometry_grid);
  return {{"C_minus", cm},
          {"C_plus", cp},
          {"grid", c.geometry_grid},
          {"order", c.projector_order},
          {"minus_max", e.minus_max},
          {"plus_min", e.plus_min}};
}

json run_evolution(const ExperimentConfig& c, const fs::path& out) {
  const Frequencies w = c.omega();
  const double t1 = w.period1();
  auto lat = make_lattice(c);
  const TotalState s0 = initial_state(c, lat);
  auto h = std::make_shared<const SparseHermitian>(assemble_total(*lat, c.model(), w));
  const Propagator prop(h, w, c.propagator_params());
  const std::vector<double> times = c.sample_times();
  const std::vector<TotalState> states = evolve(prop, s0, times, c.boundary_policy());

  std::vector<ObservableRow> rows;
  for (std::size_t i = 0; i < times.size(); ++i) rows.push_back(observables(states[i], w, times[i]));
  {
    auto f = open_out(out / "observables.csv");
    write_observable_csv(f, rows);
  }
  json snaps = json::array();
  int index = 0;
  for (double s : c.snapshots_T1) {
    if (s > c.t_max_T1 + 1e-12) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (std::abs(times[i] - s * t1) < std::abs(times[best] - s * t1)) best = i;
    const std::string name = "snapshot_" + std::to_string(index++) + ".csv";
    auto f = open_out(out / name);
    write_state_csv(f, states[best]);
    snaps.push_back({{"file", name}, {"t_over_T1", times[best] / t1}});
  }
  double worst_boundary = 0.0;
  for (const auto& r : rows) worst_boundary = std::max(worst_boundary, r.boundary);
  return {{"dimension", lat->dimension()},
          {"method", prop.method() == Method::spectral ? "spectral" : "krylov"},
          {"samples", times.size()},
          {"max_boundary_mass", worst_boundary},
          {"snapshots", snaps}};
}

json run_cat_analysis(const ExperimentConfig& c, const fs::path& out) {
  json summary;
  const std::vector<std::string> header{"dphi_over_pi", "theta_over_pi", "W_minus",
                                        "W_minus_predicted", "W_minus_metric"};
  if (!c.sweep_dphi_over_pi.empty()) {
    auto f = open_out(out / "weight_sweep_dphi.csv");
    CsvWriter csv(f, header);
    for (double d : c.sweep_dphi_over_pi) {
      const WeightPoint p = static_weight(c, d * kPi, c.qubit_theta);
      csv.row({d, c.qubit_theta / kPi, p.w_minus, p.w_predicted, p.w_metric});
    }
    summary["weight_sweep_dphi"] = c.sweep_dphi_over_pi.size();
  }
  if (!c.sweep_theta_over_pi.empty()) {
    auto f = open_out(out / "weight_sweep_theta.csv");
    CsvWriter csv(f, header);
    for (double th : c.sweep_theta_over_pi) {
      const WeightPoint p = static_weight(c, c.sweep_theta_dphi_over_pi * kPi, th * kPi);
      csv.row({c.sweep_theta_dphi_over_pi, th, p.w_minus, p.w_predicted, p.w_metric});
    }
    summary["weight_sweep_theta"] = c.sweep_theta_over_pi.size();
  }
  if (c.t_max_T1 <= 0.0) return summary;

  const TwoLevelField model = c.model();
  const Frequencies w = c.omega();
  const double t1 = w.period1();
  auto lat = make_lattice(c);
  const TotalState s0 = initial_state(c, lat);
  auto h = std::make_shared<const SparseHermitian>(assemble_total(*lat, model, w));
  const Propagator prop(h, w, c.propagator_params());
  const std::vector<double> times = c.sample_times();
  const std::vector<TotalState> states = evolve(prop, s0, times, c.boundary_policy());

  const int m = phase_grid_for(c, *lat);
  const int order = c.projector_order;
  const PhaseSpaceProjector pm0(lat, model, w, Band::minus, 0, m);
  const PhaseSpaceProjector pm1(lat, model, w, Band::minus, 1, m);
  const PhaseSpaceProjector pp0(lat, model, w, Band::plus, 0, m);
  const PhaseSpaceProjector pp1(lat, model, w, Band::plus, 1, m);

  const double ref = observables(s0, w).nperp;
  const GeometryMap gmap = geometry_map(model, w, order, c.geometry_grid, c.geometry_grid);
  const BandSplines sm(gmap, Band::minus), sp(gmap, Band::plus);
  const Phase2 phi0(c.mode1.phi0, c.mode2.phi0);
  const double d1 = c.mode1.phase_width(), d2 = c.mode2.phase_width();
  const PurityPrediction gm = purity_prediction(sm, phi0, d1, d2, times);
  const PurityPrediction gp = purity_prediction(sp, phi0, d1, d2, times);

  std::vector<TotalState> minus, plus;
  std::vector<double> wm0, wm1, wp, wp0, norm2;
  auto ff = open_out(out / "fidelity.csv");
  auto fp = open_out(out / "purity.csv");
  CsvWriter fid(ff, {"t_over_T1", "F_order0", "F_order1", "W_below", "W_minus_order0",
                     "W_minus_order1", "W_plus"});
  CsvWriter pur(fp, {"t_over_T1", "purity_minus", "purity_plus", "purity_metric_minus",
                     "purity_metric_plus"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const TotalState& st = states[i];
    const double n2 = st.norm2();
    const Projection a0 = project(st, pm0), a1 = project(st, pm1);
    const Projection b0 = project(st, pp0), b1 = project(st, pp1);
    const HalfspaceSplit split = halfspace_split(st, w, ref);
    const double f0 = fidelity(split.below.amp, a0.state.amp);
    const double f1 = fidelity(split.below.amp, a1.state.amp);
    const Projection& a = order == 0 ? a0 : a1;
    const Projection& b = order == 0 ? b0 : b1;
    fid.row({times[i] / t1, f0, f1, split.weight_below / n2, a0.weight / n2, a1.weight / n2,
             b.weight / n2});
    pur.row({times[i] / t1, observables(a.state, w).purity, observables(b.state, w).purity,
             gm.purity[i], gp.purity[i]});
    minus.push_back(a.state);
    plus.push_back(b.state);
    wm0.push_back(a0.weight / n2);
    wm1.push_back(a1.weight / n2);
    wp.push_back(b.weight / n2);
    wp0.push_back(b0.weight / n2);
    norm2.push_back(n2);
  }

  const double detected = detect_separation(times, minus, plus, w, c.separation_threshold);
  CatSplitReport r;
  r.t_sep_detected = detected >= 0.0;
  r.t_sep_over_T1 = r.t_sep_detected ? detected / t1 : c.t_sep_fallback_T1;
  std::size_t k = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] / t1 - r.t_sep_over_T1) < std::abs(times[k] / t1 - r.t_sep_over_T1)) k = i;
  r.w_minus = order == 0 ? wm0[k] : wm1[k];
  r.w_plus = wp[k];
  r.w_edge = 1.0 - wm0[k] - wp0[k];

  std::vector<double> x, ym, yp;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i] / t1;
    if (t < c.fit_window_T1[0] - 1e-9 || t > c.fit_window_T1[1] + 1e-9) continue;
    x.push_back(t);
    ym.push_back(observables(minus[i], w).nperp);
    yp.push_back(observables(plus[i], w).nperp);
  }
  if (x.size() >= 2) {
    r.slope_minus = fit_slope(x, ym);
    r.slope_plus = fit_slope(x, yp);
  }
  r.slope_theory = -w.norm() / w.omega1 * chern_number(gmap, Band::minus);
  {
    auto f = open_out(out / "cat_report.json");
    write_cat_report_json(f, r);
  }
  summary["t_sep_detected"] = r.t_sep_detected;
  summary["t_sep_over_T1"] = r.t_sep_over_T1;
  summary["W_minus"] = r.w_minus;
  summary["purity_average_minus"] = gm.average;
  summary["purity_bound_minus"] = gm.bound;
  summary["dimension"] = lat->dimension();
  return summary;
}

json run_semiclassics(const ExperimentConfig& c, const fs::path& out) {
  const TwoLevelField model = c.model();
  const Frequencies w = c.omega();
  const double t1 = w.period1();
  const int order = c.projector_order;
  const GeometryMap gmap = geometry_map(model, w, order, c.geometry_grid, c.geometry_grid);
  const std::vector<double> times = c.sample_times();
  const double r = w.norm();
  const double ue1 = w.omega1 / r, ue2 = w.omega2 / r;

  auto lat = make_lattice(c);
  const TotalState s0 = initial_state(c, lat);
  const int m = phase_grid_for(c, *lat);
  const Phase2 phi0(c.mode1.phi0, c.mode2.phi0);
  json summary;
  for (Band band : {Band::minus, Band::plus}) {
    const std::string b = name(band);
    const BandSplines spl(gmap, band);
    for (std::size_t k = 0; k < c.trajectory_phases.size(); ++k) {
      const auto& ph = c.trajectory_phases[k];
      const ClassicalTrajectory tr = classical_trajectory(spl, Phase2(ph[0], ph[1]), times);
      auto f = open_out(out / ("trajectory_" + b + "_" + std::to_string(k) + ".csv"));
      write_trajectory_csv(f, tr, t1);
    }

    const PhaseSpaceProjector p(lat, model, w, band, order, m);
    const Projection proj = project(s0, p);
    const ObservableRow start = observables(proj.state, w);
    const PhaseAmplitudeMap pa = phase_amplitude(proj.state, m);
    std::vector<double> density(pa.up.size());
    for (std::size_t k = 0; k < density.size(); ++k) density[k] = pa.density(int(k));
    const MomentPrediction mp = phase_averaged_moments(spl, density, m, times);
    {
      auto f = open_out(out / ("moments_" + b + ".csv"));
      CsvWriter csv(f, {"t_over_T1", "n1_mean", "n2_mean", "nE_mean", "nperp_mean", "var_nE",
                        "var_nperp"});
      for (std::size_t k = 0; k < times.size(); ++k)
        csv.row({times[k] / t1, start.n1 + mp.mean1[k], start.n2 + mp.mean2[k],
                 start.ne + mp.mean_along(k, ue1, ue2), start.nperp + mp.mean_along(k, -ue2, ue1),
                 mp.var_along(k, ue1, ue2), mp.var_along(k, -ue2, ue1)});
    }
    {
      const auto rows = spreading_prediction(spl, proj.state, times, -ue2, ue1, m);
      auto f = open_out(out / ("spreading_" + b + ".csv"));
      CsvWriter csv(f, {"t_over_T1", "variance", "metric", "correlation", "dnperp"});
      for (const auto& row : rows)
        csv.row({row.t / t1, row.variance, row.metric, row.correlation, row.spread});
    }
    const PurityPrediction pp =
        purity_prediction(spl, phi0, c.mode1.phase_width(), c.mode2.phase_width(), times);
    {
      auto f = open_out(out / ("purity_prediction_" + b + ".csv"));
      CsvWriter csv(f, {"t_over_T1", "purity"});
      for (std::size_t k = 0; k < times.size(); ++k) csv.row({times[k] / t1, pp.purity[k]});
    }
    summary[b] = {{"chern", spl.chern()},
                  {"weight", proj.weight / s0.norm2()},
                  {"purity_average", pp.average},
                  {"purity_bound", pp.bound}};
  }
  const AdiabaticTimescale ts = adiabatic_timescale(model, w);
  summary["epsilon_adiab"] = ts.epsilon;
  summary["tau_adiab_over_T1"] = ts.tau_over_T1;
  {
    auto f = open_out(out / "semiclassics.json");
    f << rounded(summary).dump(2) << "\n";
  }
  return summary;
}

json run_quasiperiods(const ExperimentConfig& c, const fs::path& out) {
  const Frequencies w = c.omega();
  const auto q = quasi_periods(w.omega1, w.omega2, c.max_quasi_period);
  auto f = open_out(out / "quasiperiods.json");
  write_quasi_periods_json(f, q);
  json periods = json::array();
  for (const auto& x : q) periods.push_back(x.p1);
  return {{"count", q.size()}, {"p1", periods}};
}

void write_manifest(const fs::path& out, const std::string& command, const ExperimentConfig& c,
                    double wall_seconds, const json& summary) {
  json j;
  j["command"] = command;
  j["preset"] = c.preset;
  j["config_hash"] = config_hash(c);
  j["config"] = to_json(c);
  j["versions"] = {{"catpump", "0.1.0"},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"fft", fft_library_version()},
                   {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["threads"] = c.threads;
  j["wall_time_s"] = wall_seconds;
  j["summary"] = summary;
  auto f = open_out(out / "run_manifest.json");
  f << rounded(j).dump(2) << "\n";
}

}  // namespace catpump::cli
