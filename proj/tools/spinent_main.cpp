// Command-line front door: build spin-ring spectra and emit sweep tables,
// threshold temperatures, energy classifications and certification runs as
// machine-readable CSV/JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spinent/spinent.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCeiling = 3;

struct RunConfig {
  std::string model = "heisenberg";
  int n_sites = 8;
  double coupling = 1.0;
  std::string grid = "0:3:31";
  std::string format = "csv";
  std::string output;         // empty = stdout
  std::string output_dir;     // env override applies
  std::string plot_script;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  double energy = 0.0;
  bool limit = false;
  int samples = 100000;
  int restarts = 200;
  bool inject_fault = false;
};

spinent::Model parse_model(const std::string& name) {
  if (name == "heisenberg") return spinent::Model::Heisenberg;
  if (name == "xy") return spinent::Model::XY;
  throw std::invalid_argument("model must be 'heisenberg' or 'xy'");
}

// start:stop:count with an optional :lin or :log suffix.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("grid must be start:stop:count[:lin|log]");
  }
  const double start = std::stod(parts[0]);
  const double stop = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  const bool log_scale = parts.size() == 4 && parts[3] == "log";
  if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin") {
    throw std::invalid_argument("grid scale must be 'lin' or 'log'");
  }
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (start < 0.0) throw std::invalid_argument("grid start must be >= 0");
  if (stop < start) throw std::invalid_argument("grid stop must be >= start");
  if (log_scale && start <= 0.0) {
    throw std::invalid_argument("log grids need a positive start");
  }

  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    grid.push_back(log_scale
                       ? start * std::pow(stop / start, f)
                       : start + f * (stop - start));
  }
  return grid;
}

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Resolves the output target: relative paths land in --output-dir, which
// itself defaults to $SPINENT_OUTPUT_DIR when set.
std::string resolve_output(const RunConfig& cfg, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  std::string dir = cfg.output_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("SPINENT_OUTPUT_DIR")) dir = env;
  }
  if (dir.empty()) return path;
  return (fs::path(dir) / p).string();
}

void write_text(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  const std::string path = resolve_output(cfg, cfg.output);
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + path);
  out << text;
}

json config_json(const RunConfig& cfg, const std::string& command) {
  json j;
  j["command"] = command;
  j["model"] = cfg.model;
  j["n_sites"] = cfg.n_sites;
  j["coupling"] = cfg.coupling;
  return j;
}

json provenance_json(const RunConfig& cfg) {
  json j;
  j["version"] = spinent::kVersion;
  j["seed"] = cfg.seed;
  return j;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

const char* kSweepHeader =
    "T,U,U_per_site,fired_R2,fired_C2,fired_C3,fired_R3,"
    "margin_R2,margin_C2,margin_C3,margin_R3";

int run_sweep(const RunConfig& cfg) {
  const spinent::ChainSpec spec{parse_model(cfg.model), cfg.n_sites, 1.0,
                                spinent::Boundary::Periodic};
  spec.validate();
  const auto grid = parse_grid(cfg.grid);
  const auto rows = spinent::temperature_sweep(spec, grid);

  std::string text;
  if (cfg.format == "csv") {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto& row : rows) {
      out += fmt12(row.temperature);
      out += "," + fmt12(row.energy * cfg.coupling);
      out += "," + fmt12(row.energy * cfg.coupling / cfg.n_sites);
      for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
        out += row.verdict[cls].fired ? ",1" : ",0";
      }
      for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
        out += "," + fmt12(row.verdict[cls].margin);
      }
      out += "\n";
    }
    text = out;
  } else {
    json j;
    j["config"] = config_json(cfg, "sweep");
    j["config"]["grid"] = cfg.grid;
    j["rows"] = json::array();
    for (const auto& row : rows) {
      json r;
      r["T"] = row.temperature;
      r["U"] = row.energy * cfg.coupling;
      r["U_per_site"] = row.energy * cfg.coupling / cfg.n_sites;
      for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
        r["fired_" + spinent::class_name(cls)] = row.verdict[cls].fired;
      }
      for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
        r["margin_" + spinent::class_name(cls)] = row.verdict[cls].margin;
      }
      j["rows"].push_back(r);
    }
    j["provenance"] = provenance_json(cfg);
    text = j.dump(2) + "\n";
  }
  write_text(cfg, text);

  if (!cfg.plot_script.empty()) {
    const std::string data = cfg.output.empty() ? "sweep.csv" : cfg.output;
    std::string script;
    script += "# gnuplot script for a temperature sweep\n";
    script += "set datafile separator ','\n";
    script += "set xlabel 'T [J/k_B]'\n";
    script += "set ylabel 'U/N [J]'\n";
    script += "plot '" + data + "' using 1:3 skip 1 with lines title 'U/N'\n";
    const std::string path = resolve_output(cfg, cfg.plot_script);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open plot script " + path);
    out << script;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// thresholds
// ---------------------------------------------------------------------------

int run_thresholds(const RunConfig& cfg) {
  const spinent::Model model = parse_model(cfg.model);

  struct Row {
    std::string cls;
    std::optional<spinent::ThresholdResult> result;
  };
  std::vector<Row> rows;

  if (cfg.limit) {
    if (model != spinent::Model::XY) {
      throw std::invalid_argument(
          "thermodynamic-limit thresholds exist for --model xy only");
    }
    for (spinent::BoundClass cls : {spinent::BoundClass::C3, spinent::BoundClass::R3}) {
      const double t = spinent::xy_limit_threshold(cls);
      const double residual = std::abs(spinent::xy_limit_internal_energy(t) -
                                       spinent::bound_coefficient(model, cls));
      rows.push_back(Row{spinent::class_name(cls),
                         spinent::ThresholdResult{cls, t, t - 1e-8, t + 1e-8,
                                                  residual}});
    }
  } else {
    const spinent::ChainSpec spec{model, cfg.n_sites, 1.0,
                                  spinent::Boundary::Periodic};
    spec.validate();
    const auto dec = spinent::diagonalize(spinent::build_hamiltonian(spec));
    spinent::ThresholdOptions opts;
    opts.temperature_tol = cfg.tol;
    for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
      rows.push_back(
          Row{spinent::class_name(cls), threshold_temperature(dec, cls, opts)});
    }
  }

  std::string text;
  if (cfg.format == "csv") {
    text = "class,temperature,bracket_lo,bracket_hi,residual\n";
    for (const auto& row : rows) {
      if (row.result) {
        text += row.cls + "," + fmt12(row.result->temperature) + "," +
                fmt12(row.result->bracket_lo) + "," + fmt12(row.result->bracket_hi) +
                "," + fmt12(row.result->residual) + "\n";
      } else {
        text += row.cls + ",none,,,\n";
      }
    }
  } else {
    json j;
    j["config"] = config_json(cfg, "thresholds");
    j["config"]["limit"] = cfg.limit;
    j["rows"] = json::array();
    for (const auto& row : rows) {
      json r;
      r["class"] = row.cls;
      if (row.result) {
        r["temperature"] = row.result->temperature;
        r["bracket_lo"] = row.result->bracket_lo;
        r["bracket_hi"] = row.result->bracket_hi;
        r["residual"] = row.result->residual;
      } else {
        r["temperature"] = nullptr;
      }
      j["rows"].push_back(r);
    }
    j["provenance"] = provenance_json(cfg);
    text = j.dump(2) + "\n";
  }
  write_text(cfg, text);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int run_classify(const RunConfig& cfg) {
  const spinent::ChainSpec spec{parse_model(cfg.model), cfg.n_sites, 1.0,
                                spinent::Boundary::Periodic};
  spec.validate();
  const auto verdict = spinent::classify(cfg.energy, spec);

  std::string text;
  if (cfg.format == "csv") {
    text = "class,bound,fired,margin\n";
    for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
      const double bound =
          spinent::bound_value(spec.model, cls, spec.n_sites, spec.coupling);
      text += spinent::class_name(cls) + "," + fmt12(bound * cfg.coupling) + "," +
              (verdict[cls].fired ? "1" : "0") + "," + fmt12(verdict[cls].margin) +
              "\n";
    }
  } else {
    json j;
    j["config"] = config_json(cfg, "classify");
    j["config"]["energy"] = cfg.energy;
    j["rows"] = json::array();
    for (spinent::BoundClass cls : spinent::kAllBoundClasses) {
      json r;
      r["class"] = spinent::class_name(cls);
      r["bound"] =
          spinent::bound_value(spec.model, cls, spec.n_sites, spec.coupling) *
          cfg.coupling;
      r["fired"] = verdict[cls].fired;
      r["margin"] = verdict[cls].margin;
      j["rows"].push_back(r);
    }
    j["provenance"] = provenance_json(cfg);
    text = j.dump(2) + "\n";
  }
  write_text(cfg, text);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const RunConfig& cfg) {
  spinent::VerifyConfig vc;
  vc.seed = cfg.seed;
  vc.sweep_samples = cfg.samples;
  vc.statistic_samples = cfg.samples;
  vc.witness_restarts = cfg.restarts;
  vc.counterexample_dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
  if (const char* env = std::getenv("SPINENT_OUTPUT_DIR");
      env && cfg.output_dir.empty()) {
    vc.counterexample_dir = env;
  }
  if (cfg.inject_fault) vc.injected_c3_coefficient = -1.6;

  const auto report = spinent::verify_all(vc);
  for (const auto& check : report.checks) {
    std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.detail.c_str());
  }
  int failed = 0;
  for (const auto& check : report.checks) failed += check.passed ? 0 : 1;
  std::printf("%zu checks, %d failed\n", report.checks.size(), failed);
  for (const auto& file : report.counterexample_files) {
    std::printf("counterexample written: %s\n", file.c_str());
  }
  return failed == 0 ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipartite-entanglement certification for Heisenberg and "
               "isotropic XY spin rings from the internal energy"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "master random seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "bisection tolerance in T")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--output-dir", cfg.output_dir,
                 "directory for outputs (overrides $SPINENT_OUTPUT_DIR)");
  app.add_option("--coupling", cfg.coupling,
                 "J in physical units; rescales emitted energies only")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto add_chain_options = [&cfg](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "spin model")
        ->check(CLI::IsMember({"heisenberg", "xy"}))
        ->capture_default_str();
    sub->add_option("-n,--sites", cfg.n_sites, "number of sites")
        ->capture_default_str();
  };

  CLI::App* sweep = app.add_subcommand("sweep", "temperature sweep with verdicts");
  add_chain_options(sweep);
  sweep->add_option("--t", cfg.grid, "grid start:stop:count[:lin|log]")
      ->capture_default_str();
  sweep->add_option("--plot-script", cfg.plot_script,
                    "write a companion gnuplot script");

  CLI::App* thresholds =
      app.add_subcommand("thresholds", "threshold temperatures per class");
  add_chain_options(thresholds);
  thresholds->add_flag("--limit", cfg.limit,
                       "XY thermodynamic-limit thresholds (C3, R3)");

  CLI::App* classify = app.add_subcommand("classify", "classify a bare energy");
  add_chain_options(classify);
  CLI::Option* energy_opt =
      classify->add_option("--energy", cfg.energy, "internal energy in units of J");

  CLI::App* verify = app.add_subcommand("verify", "run the full certification");
  verify->add_option("--samples", cfg.samples, "random states per sweep")
      ->capture_default_str();
  verify->add_option("--restarts", cfg.restarts, "optimizer restarts")
      ->capture_default_str();
  verify->add_flag("--inject-fault", cfg.inject_fault,
                   "corrupt the 2-producible bound to exercise the failure path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const bool needs_ring =
        sweep->parsed() || classify->parsed() || (thresholds->parsed() && !cfg.limit);
    if (needs_ring && cfg.n_sites > spinent::kMaxSites) {
      std::fprintf(stderr, "error: n=%d exceeds the supported ceiling of %d sites\n",
                   cfg.n_sites, spinent::kMaxSites);
      return kExitResourceCeiling;
    }
    if (sweep->parsed()) return run_sweep(cfg);
    if (thresholds->parsed()) return run_thresholds(cfg);
    if (classify->parsed()) {
      if (energy_opt->count() == 0) {
        std::fprintf(stderr, "error: classify requires --energy\n");
        return kExitUsage;
      }
      return run_classify(cfg);
    }
    if (verify->parsed()) return run_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPropertyFailure;
  }
  return kExitUsage;
}
