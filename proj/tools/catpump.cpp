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

// catpump geometry|evolve|cat|semiclassics|quasiperiods
//   [--config FILE] [--preset NAME] [--paper-scale] [--threads N] [--out DIR]

#include "runner.hpp"

#include <catpump/errors.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace catpump;
using namespace catpump::cli;

struct Options {
  std::string config;
  std::string preset;
  bool paper_scale = false;
  int threads = 0;
  std::string out;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig c;
  nlohmann::json doc;
  if (!o.config.empty()) {
    std::ifstream f(o.config);
    if (!f) throw ConfigError("cannot open config file " + o.config);
    try {
      doc = nlohmann::json::parse(f, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file " + o.config + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  }
  // Preset from the command line wins over one named in the file; the file
  // then overrides individual preset fields.
  std::string preset = o.preset;
  if (preset.empty() && doc.contains("preset")) preset = doc["preset"].get<std::string>();
  if (!preset.empty()) c = preset_config(preset);
  if (!doc.is_null()) apply_json(c, doc);
  if (!preset.empty()) c.preset = preset;
  if (o.paper_scale) apply_paper_scale(c);
  if (o.threads > 0) c.threads = o.threads;
  if (!o.out.empty()) c.out_dir = o.out;
  validate(c);
  return c;
}

using Runner = nlohmann::json (*)(const ExperimentConfig&, const std::filesystem::path&);

int run(const std::string& command, Runner fn, const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig c = load(o);
  const std::filesystem::path out(c.out_dir);
  std::filesystem::create_directories(out);
  const nlohmann::json summary = fn(c, out);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, command, c, wall, summary);
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit topologically coupled to two rotor modes: experiment runner"};
  app.require_subcommand(1, 1);
  Options o;

  const std::vector<std::pair<std::string, Runner>> commands{
      {"geometry", run_geometry},         {"evolve", run_evolution},
      {"cat", run_cat_analysis},          {"semiclassics", run_semiclassics},
      {"quasiperiods", run_quasiperiods},
  };
  const std::map<std::string, std::string> help{
      {"geometry", "band geometry map and Chern numbers"},
      {"evolve", "time evolution, observables and snapshots"},
      {"cat", "cat split report, weight sweeps, purity and fidelity series"},
      {"semiclassics", "classical trajectories and semiclassical predictions"},
      {"quasiperiods", "quasi-periods of the phase trajectory"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    CLI::App* s = app.add_subcommand(name, help.at(name));
    s->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    s->add_option("--preset", o.preset, "built-in preset")
        ->check(CLI::IsMember(preset_names()));
    s->add_flag("--paper-scale", o.paper_scale, "full-size truncation window");
    s->add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber);
    s->add_option("--out", o.out, "output directory");
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  set_warning_sink([](const std::string& m) { std::cerr << "warning: " << m << "\n"; });
  try {
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return run(commands[i].first, commands[i].second, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const catpump::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
