#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "mixlab/cohomology.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/heisenberg.hpp"
#include "mixlab/io.hpp"
#include "mixlab/parallel.hpp"
#include "mixlab/random.hpp"
#include "mixlab/specialflow.hpp"

#ifndef MIXLAB_ROOF_DIR
#define MIXLAB_ROOF_DIR "data/roofs"
#endif

namespace mixlab::lab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kExperiments = {
    "classify", "solve",   "stretch", "sublevel", "visits",       "correlate",
    "fiber-profile", "hitting", "weyl", "l2",     "return-check", "conjugacy"};

bool needs_roof(const std::string& e) { return e != "sublevel" && e != "return-check"; }

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

template <class T>
void set_default(std::optional<T>& field, T value) {
  if (!field) field = value;
}

template <class T>
void set_default(std::vector<T>& field, std::vector<T> value) {
  if (field.empty()) field = std::move(value);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

fs::path find_roof(const std::string& name) {
  const fs::path direct(name);
  if (fs::exists(direct)) return direct;
  if (const char* env = std::getenv("MIXLAB_ROOFS")) {
    const fs::path p = fs::path(env) / name;
    if (fs::exists(p)) return p;
  }
  const fs::path shipped = fs::path(MIXLAB_ROOF_DIR) / name;
  if (fs::exists(shipped)) return shipped;
  throw ValidationError("roof file not found: " + name);
}

struct LoadedRoof {
  skew::SkewShift f;
  FiberedTrigPoly phi;
};

LoadedRoof load(const ExperimentConfig& c) {
  io::RoofFile r = io::load_roof(find_roof(c.roof));
  const double alpha = c.alpha.value_or(r.alpha);
  const double beta = c.beta.value_or(r.beta);
  const auto precision =
      c.precision == "double-double" ? skew::Precision::DoubleDouble : skew::Precision::Double;
  return {skew::SkewShift(alpha, beta, precision), r.phi};
}

flow::Cube cube_from(const flow::Roof& roof, const std::vector<double>& v) {
  return flow::make_cube(roof, v[0], v[1], v[2], v[3], v[4]);
}

ExperimentResult classify(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const auto report = cohomology::classify_roof(r.f, r.phi, c.tol);
  ExperimentResult out;
  out.summary = io::report_to_json(report);
  out.headline = cohomology::to_string(report.verdict);
  Table t{"distributions", {"m", "n", "re", "im", "abs"}, {}};
  for (const auto& e : report.entries)
    t.rows.push_back({fmt(e.label.m), fmt(e.label.n), fmt(e.value.real()), fmt(e.value.imag()),
                      fmt(std::abs(e.value))});
  out.tables.push_back(std::move(t));
  return out;
}

ExperimentResult solve(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const auto sol = cohomology::solve_coboundary(r.f, r.phi, c.tol);
  ExperimentResult out;
  out.summary = {{"mean", sol.mean},
                 {"u", io::roof_to_json({r.f.alpha(), r.f.beta(), sol.u})}};
  out.headline = "transfer function found, mean " + fmt(sol.mean);
  Table t{"transfer", {"m", "k", "re", "im"}, {}};
  for (const auto& mode : sol.u.modes())
    t.rows.push_back({fmt(mode.m), fmt(mode.k), fmt(mode.c.real()), fmt(mode.c.imag())});
  out.tables.push_back(std::move(t));
  return out;
}

ExperimentResult stretch(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const auto phi = skew::project(r.phi).phi;
  const auto curve = skew::birkhoff_sublevel_curve(r.f, phi, c.n, *c.C, *c.grid, c.workers);
  ExperimentResult out;
  Table t{"stretch", {"n", "measure", "error_bound"}, {}};
  json values = json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    t.rows.push_back({fmt(c.n[i]), fmt(curve[i].measure), fmt(curve[i].error_bound)});
    values.push_back({{"n", c.n[i]}, {"measure", curve[i].measure}, {"error_bound", curve[i].error_bound}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"sublevel", values}};
  out.headline = "sublevel measure at n=" + fmt(c.n.back()) + ": " + fmt(curve.back().measure);
  return out;
}

ExperimentResult sublevel(const ExperimentConfig& c) {
  ExperimentResult out;
  Table measures{"sublevel", {"trial", "delta", "measure"}, {}};
  Table slopes{"slopes", {"trial", "slope"}, {}};
  json fits = json::array();
  double min_slope = INFINITY;
  for (int trial = 0; trial < c.trials; ++trial) {
    const TrigPoly1D g = random_unit_trig_poly(c.degree, c.seed, static_cast<std::uint64_t>(trial));
    const auto m = sublevel_profile(g, c.delta, *c.grid, c.workers);
    for (std::size_t i = 0; i < m.size(); ++i)
      measures.rows.push_back({fmt(trial), fmt(c.delta[i]), fmt(m[i])});
    const double slope = loglog_slope(c.delta, m);
    slopes.rows.push_back({fmt(trial), fmt(slope)});
    fits.push_back(slope);
    min_slope = std::min(min_slope, slope);
  }
  out.tables.push_back(std::move(measures));
  out.tables.push_back(std::move(slopes));
  out.summary = {{"slopes", fits}, {"min_slope", min_slope}};
  out.headline = "minimum log-log slope " + fmt(min_slope);
  return out;
}

ExperimentResult visits(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  ExperimentResult out;
  Table t{"visits", {"N", "fraction"}, {}};
  json values = json::array();
  for (std::int64_t N : c.n) {
    const double v = skew::visit_fraction(r.f, r.phi, skew::torus_point(c.x, c.y), *c.C, N);
    t.rows.push_back({fmt(N), fmt(v)});
    values.push_back({{"N", N}, {"fraction", v}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"visits", values}};
  out.headline = "visit fraction at N=" + fmt(c.n.back()) + ": " + values.back()["fraction"].dump();
  return out;
}

ExperimentResult correlate(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const flow::Roof roof = flow::certify_roof(r.phi);
  const flow::Cube q = cube_from(roof, c.cube);
  ExperimentResult out;
  Table t{"correlation", {"t", "value", "stderr", "samples", "seed"}, {}};
  json values = json::array();
  for (double time : c.t) {
    const auto e = flow::correlate_cubes(roof, r.f, q, q, time, *c.samples, c.seed, c.workers);
    t.rows.push_back({fmt(time), fmt(e.value), fmt(e.std_error), fmt(e.samples),
                      std::to_string(e.seed)});
    values.push_back({{"t", time}, {"value", e.value}, {"stderr", e.std_error}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"mu_Q", flow::cube_measure(roof, q)}, {"correlations", values}};
  out.headline = "correlation at t=" + fmt(c.t.back()) + ": " + values.back()["value"].dump();
  return out;
}

ExperimentResult fiber_profile(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const flow::Roof roof = flow::certify_roof(r.phi);
  const flow::Cube q = cube_from(roof, c.cube);
  const double expected = (c.arc[1] - c.arc[0]) * flow::cube_measure(roof, q);
  ExperimentResult out;
  Table t{"fiber_profile", {"t", "measure", "mixing_limit"}, {}};
  json values = json::array();
  for (double time : c.t) {
    const double v = flow::fiber_mixing_profile(roof, r.f, c.x, c.arc[0], c.arc[1], q, time,
                                                *c.resolution);
    t.rows.push_back({fmt(time), fmt(v), fmt(expected)});
    values.push_back({{"t", time}, {"measure", v}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"mixing_limit", expected}, {"profile", values}};
  out.headline = "fiber profile at t=" + fmt(c.t.back()) + ": " + values.back()["measure"].dump();
  return out;
}

ExperimentResult hitting(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const flow::Roof roof = flow::certify_roof(r.phi);
  ExperimentResult out;
  Table t{"hitting", {"t", "measure"}, {}};
  json values = json::array();
  for (double time : c.t) {
    const double v = flow::hitting_complement_measure(roof, r.f, time, *c.C, *c.grid, c.workers);
    t.rows.push_back({fmt(time), fmt(v)});
    values.push_back({{"t", time}, {"measure", v}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"complement_measure", values}};
  out.headline = "complement measure at t=" + fmt(c.t.back()) + ": " + values.back()["measure"].dump();
  return out;
}

ExperimentResult weyl(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const auto phi = skew::project(r.phi).phi;
  const auto times = cohomology::convergent_times(r.f.alpha(), c.levels[1]);
  ExperimentResult out;
  Table t{"weyl", {"level", "q", "value"}, {}};
  json values = json::array();
  for (int level = c.levels[0]; level <= c.levels[1]; ++level) {
    const std::int64_t q = times.denominators[static_cast<std::size_t>(level - 1)];
    const double v = cohomology::uniform_bound_scan(r.f, phi, q, *c.grid, c.workers);
    t.rows.push_back({fmt(level), fmt(q), fmt(v)});
    values.push_back({{"level", level}, {"q", q}, {"value", v}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"scan", values}};
  out.headline = "scanned " + fmt(static_cast<int>(values.size())) + " convergent times";
  return out;
}

ExperimentResult l2(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const auto d = cohomology::decompose_components(r.phi);
  ExperimentResult out;
  Table t{"l2", {"m", "n", "N", "value"}, {}};
  json totals = json::array();
  for (std::int64_t N : c.n) {
    double total = 0.0;
    for (const auto& s : d.components) {
      const double v = cohomology::ergodic_sum_l2(r.f, s, N);
      total += v;
      t.rows.push_back({fmt(s.label.m), fmt(s.label.n), fmt(N), fmt(v)});
    }
    totals.push_back({{"N", N}, {"total", total}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"totals", totals}};
  out.headline = "total at N=" + fmt(c.n.back()) + ": " + totals.back()["total"].dump();
  return out;
}

ExperimentResult return_check(const ExperimentConfig& c) {
  using namespace heisenberg;
  const Lattice lattice(c.euler);
  ExperimentResult out;
  Table t{"return_check", {"trial", "wx", "wy", "wz", "x", "z", "point_error", "time_error"}, {}};
  double worst_point = 0.0;
  double worst_time = 0.0;
  for (int trial = 0; trial < c.trials; ++trial) {
    CounterRng rng(c.seed, static_cast<std::uint64_t>(trial));
    AlgebraVector w{rng.uniform(-2.0, 2.0), rng.uniform(0.1, 2.0), rng.uniform(-2.0, 2.0)};
    if (rng.uniform() < 0.5) w.wy = -w.wy;
    const SectionPoint s{rng.uniform(), rng.uniform(0.0, lattice.z_period())};
    const SectionPoint exact = poincare_return(w, s, lattice);
    const NumericReturn num = poincare_return_numeric(w, s, lattice);
    const double ex = circle_distance(exact.x, num.point.x);
    const double ez = lattice.z_period() *
                      circle_distance(exact.z / lattice.z_period(), num.point.z / lattice.z_period());
    const double point_error = std::max(ex, ez);
    const double time_error = std::fabs(num.time - 1.0 / w.wy);
    worst_point = std::max(worst_point, point_error);
    worst_time = std::max(worst_time, time_error);
    t.rows.push_back({fmt(trial), fmt(w.wx), fmt(w.wy), fmt(w.wz), fmt(s.x), fmt(s.z),
                      fmt(point_error), fmt(time_error)});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"max_point_error", worst_point}, {"max_time_error", worst_time}};
  out.headline = "max point error " + fmt(worst_point) + ", max time error " + fmt(worst_time);
  return out;
}

ExperimentResult conjugacy(const ExperimentConfig& c) {
  const LoadedRoof r = load(c);
  const flow::Roof roof = flow::certify_roof(r.phi);
  const auto sol = cohomology::solve_coboundary(r.f, r.phi, c.tol);
  ExperimentResult out;
  Table t{"conjugacy", {"t", "deviation"}, {}};
  json values = json::array();
  double worst = 0.0;
  for (double time : c.t) {
    const double dev = flow::trivial_conjugacy_check(roof, r.f, sol.u, sol.mean, time, c.points, c.seed);
    worst = std::max(worst, dev);
    t.rows.push_back({fmt(time), fmt(dev)});
    values.push_back({{"t", time}, {"deviation", dev}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"constant", sol.mean}, {"deviations", values}, {"max_deviation", worst}};
  out.headline = "max deviation " + fmt(worst);
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "roof",    "alpha",     "beta",      "C",      "t",      "n",
      "grid",       "samples", "seed",      "workers",   "precision", "x",   "y",
      "arc",        "cube",    "resolution", "tol",      "levels", "points", "trials",
      "degree",     "delta",   "euler"};
  return keys;
}

ExperimentConfig resolve(ExperimentConfig c) {
  const std::string& e = c.experiment;
  require(std::find(kExperiments.begin(), kExperiments.end(), e) != kExperiments.end(),
          "unknown experiment '" + e + "'");
  if (needs_roof(e)) require(!c.roof.empty(), e + " needs --roof");
  require(c.precision == "double" || c.precision == "double-double",
          "precision must be 'double' or 'double-double'");
  require(c.tol > 0.0, "tol must be positive");
  if (c.alpha) require(*c.alpha >= 0.0 && *c.alpha < 1.0, "alpha must lie in [0, 1)");
  if (c.beta) require(*c.beta >= 0.0 && *c.beta < 1.0, "beta must lie in [0, 1)");
  require(c.workers >= 0, "workers must be >= 0");

  if (e == "stretch") {
    set_default(c.C, 2.0);
    set_default(c.n, {100, 1000, 10000});
    set_default(c.grid, 2048);
  } else if (e == "sublevel") {
    if (c.trials == 0) c.trials = 10;
    set_default(c.delta, {1e-1, 1e-2, 1e-3, 1e-4});
    set_default(c.grid, 1 << 22);
    require(c.degree >= 1, "degree must be >= 1");
    require(c.delta.size() >= 2, "sublevel needs at least two delta values");
    for (double d : c.delta) require(d > 0.0, "delta values must be positive");
  } else if (e == "visits") {
    set_default(c.C, 2.0);
    set_default(c.n, {100, 10000});
  } else if (e == "correlate") {
    set_default(c.cube, {0.0, 0.5, 0.0, 0.5, 0.5});
    set_default(c.t, {0.0, 100.0, 200.0});
    set_default(c.samples, std::int64_t{1000000});
  } else if (e == "fiber-profile") {
    set_default(c.arc, {0.0, 1.0});
    set_default(c.cube, {0.0, 0.5, 0.0, 0.5, 0.5});
    set_default(c.t, {0.0, 200.0});
    set_default(c.resolution, 1024);
  } else if (e == "hitting") {
    set_default(c.C, 2.0);
    set_default(c.t, {100.0, 10000.0});
    set_default(c.grid, 256);
  } else if (e == "weyl") {
    set_default(c.levels, {5, 25});
    set_default(c.grid, 256);
    require(c.levels.size() == 2 && c.levels[0] >= 1 && c.levels[0] <= c.levels[1],
            "levels must be [first, last] with 1 <= first <= last");
  } else if (e == "l2") {
    set_default(c.n, {1, 10, 100, 10000});
  } else if (e == "return-check") {
    if (c.trials == 0) c.trials = 100;
    require(c.euler >= 1, "euler must be >= 1");
  } else if (e == "conjugacy") {
    set_default(c.t, {0.7, 3.3, 10.1});
  }
  if (c.C) require(*c.C > 0.0, "C must be positive");
  if (c.grid) require(*c.grid > 0, "grid must be positive");
  if (c.samples) require(*c.samples > 0, "samples must be positive");
  if (c.resolution) require(*c.resolution > 0, "resolution must be positive");
  for (std::int64_t v : c.n) require(v >= 0, "n values must be >= 0");
  require(c.points > 0, "points must be positive");
  require(c.trials >= 0, "trials must be >= 0");
  if (!c.arc.empty()) require(c.arc.size() == 2, "arc must be [y1, y2]");
  if (!c.cube.empty()) require(c.cube.size() == 5, "cube must be [x1, x2, y1, y2, h]");
  return c;
}

json config_to_json(const ExperimentConfig& c, bool include_workers) {
  json j = {{"experiment", c.experiment},
            {"roof", c.roof},
            {"seed", c.seed},
            {"precision", c.precision},
            {"x", c.x},
            {"y", c.y},
            {"tol", c.tol},
            {"points", c.points},
            {"trials", c.trials},
            {"degree", c.degree},
            {"euler", c.euler}};
  if (c.alpha) j["alpha"] = *c.alpha;
  if (c.beta) j["beta"] = *c.beta;
  if (c.C) j["C"] = *c.C;
  if (c.grid) j["grid"] = *c.grid;
  if (c.samples) j["samples"] = *c.samples;
  if (c.resolution) j["resolution"] = *c.resolution;
  if (!c.t.empty()) j["t"] = c.t;
  if (!c.n.empty()) j["n"] = c.n;
  if (!c.arc.empty()) j["arc"] = c.arc;
  if (!c.cube.empty()) j["cube"] = c.cube;
  if (!c.levels.empty()) j["levels"] = c.levels;
  if (!c.delta.empty()) j["delta"] = c.delta;
  if (include_workers) j["workers"] = c.workers;
  return j;
}

void apply_config_json(ExperimentConfig& c, const json& j,
                       const std::vector<std::string>& fixed_keys) {
  require(j.is_object(), "config file must hold a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : j.items()) {
    require(std::find(keys.begin(), keys.end(), key) != keys.end(),
            "unknown config key '" + key + "'");
  }
  auto fixed = [&](const std::string& k) {
    return std::find(fixed_keys.begin(), fixed_keys.end(), k) != fixed_keys.end();
  };
  try {
    auto take = [&](const char* k, auto& field) {
      if (j.contains(k) && !fixed(k)) j.at(k).get_to(field);
    };
    auto take_opt = [&](const char* k, auto& field) {
      if (j.contains(k) && !fixed(k)) field = j.at(k).get<typename std::decay_t<decltype(field)>::value_type>();
    };
    if (j.contains("experiment") && !c.experiment.empty() &&
        j.at("experiment").get<std::string>() != c.experiment)
      throw ValidationError("config file is for experiment '" +
                            j.at("experiment").get<std::string>() + "'");
    take("roof", c.roof);
    take_opt("alpha", c.alpha);
    take_opt("beta", c.beta);
    take_opt("C", c.C);
    take("t", c.t);
    take("n", c.n);
    take_opt("grid", c.grid);
    take_opt("samples", c.samples);
    take("seed", c.seed);
    take("workers", c.workers);
    take("precision", c.precision);
    take("x", c.x);
    take("y", c.y);
    take("arc", c.arc);
    take("cube", c.cube);
    take_opt("resolution", c.resolution);
    take("tol", c.tol);
    take("levels", c.levels);
    take("points", c.points);
    take("trials", c.trials);
    take("degree", c.degree);
    take("delta", c.delta);
    take("euler", c.euler);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config value: ") + e.what());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const std::string& e = c.experiment;
  if (e == "classify") return classify(c);
  if (e == "solve") return solve(c);
  if (e == "stretch") return stretch(c);
  if (e == "sublevel") return sublevel(c);
  if (e == "visits") return visits(c);
  if (e == "correlate") return correlate(c);
  if (e == "fiber-profile") return fiber_profile(c);
  if (e == "hitting") return hitting(c);
  if (e == "weyl") return weyl(c);
  if (e == "l2") return l2(c);
  if (e == "return-check") return return_check(c);
  if (e == "conjugacy") return conjugacy(c);
  throw ValidationError("unknown experiment '" + e + "'");
}

TrigPoly1D random_unit_trig_poly(int degree, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  TrigPoly1D g(degree, true);
  double biggest = 0.0;
  std::vector<Complex> c(static_cast<std::size_t>(degree + 1));
  for (int m = 1; m <= degree; ++m) {
    c[m] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    biggest = std::max(biggest, std::abs(c[m]));
  }
  for (int m = 1; m <= degree; ++m) g.set_coefficient(m, c[m] / biggest);
  return g;
}

double loglog_slope(const std::vector<double>& delta, const std::vector<double>& measure) {
  require(delta.size() == measure.size() && delta.size() >= 2, "slope fit needs >= 2 points");
  const std::size_t k = delta.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(measure[i] > 0.0)) throw NumericError("sublevel measure vanished; refine the grid");
    const double lx = std::log(delta[i]);
    const double ly = std::log(measure[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(k);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> sublevel_profile(const TrigPoly1D& g, const std::vector<double>& delta,
                                     int grid, int workers) {
  require(grid >= 64, "sublevel grid must be >= 64");
  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t chunks = (static_cast<std::size_t>(grid) + kChunk - 1) / kChunk;
  std::vector<std::int64_t> counts(chunks * delta.size());
  parallel_for(chunks, workers, [&](std::size_t ch) {
    const std::size_t lo = ch * kChunk;
    const std::size_t hi = std::min(lo + kChunk, static_cast<std::size_t>(grid));
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = std::abs(g.evaluate((static_cast<double>(i) + 0.5) / grid));
      for (std::size_t d = 0; d < delta.size(); ++d)
        if (v < delta[d]) ++counts[ch * delta.size() + d];
    }
  });
  std::vector<double> out(delta.size());
  for (std::size_t d = 0; d < delta.size(); ++d) {
    std::int64_t total = 0;
    for (std::size_t ch = 0; ch < chunks; ++ch) total += counts[ch * delta.size() + d];
    out[d] = static_cast<double>(total) / grid;
  }
  return out;
}

}  // namespace mixlab::lab
