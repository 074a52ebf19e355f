#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/io.hpp"

#ifndef MIXLAB_VERSION
#define MIXLAB_VERSION "dev"
#endif

namespace mixlab::lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
}

int execute(ExperimentConfig config, const std::string& config_file,
            const std::vector<std::string>& fixed, const std::string& out_dir, std::ostream& out) {
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ValidationError("cannot read config file " + config_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("config file is not valid JSON: " + std::string(e.what()));
    }
    apply_config_json(config, j, fixed);
  }
  config = resolve(config);

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json summary = {{"experiment", config.experiment},
                  {"version", MIXLAB_VERSION},
                  {"config", config_to_json(config, false)},
                  {"results", result.summary}};

  if (out_dir.empty()) {
    out << result.headline << '\n';
    if (config.experiment == "classify" || config.experiment == "solve") {
      out << summary["results"].dump(2) << '\n';
    } else {
      for (const Table& t : result.tables) {
        if (result.tables.size() > 1) out << "# " << t.name << '\n';
        io::write_csv(out, t.header, t.rows);
      }
    }
    return 0;
  }

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + out_dir);
  json outputs = json::array();
  for (const Table& t : result.tables) {
    const fs::path p = dir / (config.experiment + "_" + t.name + ".csv");
    io::write_csv(p, t.header, t.rows);
    outputs.push_back(p.filename().string());
  }
  const fs::path summary_path = dir / (config.experiment + ".json");
  write_text(summary_path, summary.dump(2) + "\n");
  outputs.push_back(summary_path.filename().string());
  json record = {{"config", config_to_json(config, true)},
                 {"version", MIXLAB_VERSION},
                 {"outputs", outputs},
                 {"wall_time_s", wall}};
  write_text(dir / "run.json", record.dump(2) + "\n");
  out << result.headline << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mixlab: experiments with time-changes of Heisenberg nilflows", "mixlab"};
  app.set_version_flag("--version", MIXLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig config;
  std::string config_file;
  std::string out_dir;
  const char* env_workers = std::getenv("MIXLAB_WORKERS");
  if (env_workers) config.workers = std::max(0, std::atoi(env_workers));

  struct Flag {
    std::string key;
    CLI::Option* option;
  };
  std::vector<Flag> flags;
  auto add = [&](const std::string& key, auto& field, const std::string& help) {
    flags.push_back({key, app.add_option("--" + key, field, help)});
    return flags.back().option;
  };
  add("roof", config.roof, "roof JSON file (searched also in the shipped catalog)");
  add("alpha", config.alpha, "override the roof file's alpha");
  add("beta", config.beta, "override the roof file's beta");
  add("C", config.C, "threshold C");
  add("t", config.t, "times, comma separated")->delimiter(',');
  add("n", config.n, "iteration counts, comma separated")->delimiter(',');
  add("grid", config.grid, "grid size");
  add("samples", config.samples, "Monte-Carlo samples");
  add("seed", config.seed, "random seed");
  add("workers", config.workers, "worker threads (default MIXLAB_WORKERS, else all cores)");
  add("precision", config.precision, "double or double-double");
  add("x", config.x, "base coordinate x");
  add("y", config.y, "fiber coordinate y");
  add("arc", config.arc, "fiber arc y1,y2")->delimiter(',');
  add("cube", config.cube, "cube x1,x2,y1,y2,h")->delimiter(',');
  add("resolution", config.resolution, "fiber resolution");
  add("tol", config.tol, "relative tolerance for vanishing distributions");
  add("levels", config.levels, "convergent levels first,last")->delimiter(',');
  add("points", config.points, "number of phase points");
  add("trials", config.trials, "number of random trials");
  add("degree", config.degree, "degree of random polynomials");
  add("delta", config.delta, "sublevel thresholds, comma separated")->delimiter(',');
  add("euler", config.euler, "Euler number of the lattice");
  app.add_option("--config", config_file, "JSON config file; command-line flags take precedence");
  app.add_option("--out", out_dir, "directory for CSV/JSON outputs (default: print to stdout)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "classify a roof as mixing or trivial"},
      {"solve", "solve the cohomological equation for a trivial roof"},
      {"stretch", "sublevel measure of Birkhoff sums against n"},
      {"sublevel", "log-log slope of sublevel measures of random polynomials"},
      {"visits", "frequency of visits of Birkhoff sums to [-C, C]"},
      {"correlate", "Monte-Carlo correlation of a cube with its flow image"},
      {"fiber-profile", "portion of a fiber arc flowing into a cube"},
      {"hitting", "measure of the complement of the hitting set"},
      {"weyl", "uniform Birkhoff sum bounds along convergent denominators"},
      {"l2", "exact L2 norms of ergodic sums per component"},
      {"return-check", "numeric against closed-form nilflow return map"},
      {"conjugacy", "conjugacy of a trivial roof to the constant suspension"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&config, name = name] { config.experiment = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << MIXLAB_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mixlab: " << e.what() << '\n';
    return 2;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->parsed()) config.experiment = sub->get_name();

  std::vector<std::string> fixed;
  for (const Flag& f : flags)
    if (f.option->count() > 0) fixed.push_back(f.key);
  if (env_workers) fixed.push_back("workers");

  try {
    return execute(config, config_file, fixed, out_dir, out);
  } catch (const ValidationError& e) {
    err << "mixlab: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "mixlab: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "mixlab: " << e.what() << '\n';
    return 3;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mixlab::lab
