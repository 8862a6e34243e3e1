#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "padicrd/config.hpp"
#include "padicrd/io.hpp"
#include "padicrd/network.hpp"
#include "padicrd/operators.hpp"
#include "padicrd/simulate.hpp"
#include "padicrd/spectral.hpp"
#include "padicrd/turing.hpp"

namespace fs = std::filesystem;
using namespace padicrd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string graph, config, out, model, levels, space, kind, integrator;
  std::optional<unsigned> p, N;
  std::optional<double> eps, d, lambda, t_end, dt;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> params;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--graph", f.graph, "graph file (edge list or JSON)");
  cmd->add_option("--p", f.p, "prime p");
  cmd->add_option("--N", f.N, "embedding level N");
  cmd->add_option("--M", f.levels, "comma-separated level list, e.g. 2,3,4");
  cmd->add_option("--model", f.model, "brusselator | cima | custom");
  cmd->add_option("--eps", f.eps, "diffusivity eps");
  cmd->add_option("--d", f.d, "diffusivity ratio d");
  cmd->add_option("--param", f.params, "kinetics parameter NAME=VALUE (repeatable)");
  cmd->add_option("--config", f.config, "run configuration (TOML subset)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out, "output directory");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.graph.empty()) {
    c.graph = f.graph;
  } else if (c.graph && !f.config.empty() && fs::path(*c.graph).is_relative()) {
    c.graph = (fs::path(f.config).parent_path() / *c.graph).string();
  }
  if (f.p) c.p = *f.p;
  if (f.N) c.N = *f.N;
  if (!f.model.empty()) {
    if (f.model != "brusselator" && f.model != "cima" && f.model != "custom") {
      throw ConfigError("--model must be brusselator, cima or custom");
    }
    if (f.model != c.model) c.params.clear();
    c.model = f.model;
  }
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects NAME=VALUE, got '" + kv + "'");
    try {
      std::size_t used = 0;
      c.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::logic_error&) {
      throw ConfigError("--param value is not a number: '" + kv + "'");
    }
  }
  if (f.eps) c.eps = *f.eps;
  if (f.d) c.d = *f.d;
  if (!(c.eps > 0.0) || !(c.d > 0.0)) throw ConfigError("eps and d must be > 0");
  if (!f.levels.empty()) c.levels = parse_level_list(f.levels);
  if (f.seed) c.sim.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (!c.graph) throw ConfigError("no graph given (use --graph or the config key 'graph')");
  return c;
}

NetworkEmbedding load_embedding(const RunConfig& c) {
  auto doc = load_graph(*c.graph);
  const auto p = c.p ? std::optional<std::uint32_t>(*c.p) : doc.p;
  const auto n = c.N ? c.N : doc.level;
  try {
    return embed(std::move(doc.graph), p, n);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

void emit(const RunConfig& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) return;
  io::write_file(fs::path(c.out) / name, text);
}

std::vector<unsigned> levels_or(const RunConfig& c, std::vector<unsigned> fallback) {
  return c.levels.empty() ? fallback : c.levels;
}

int cmd_embed(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  std::cout << io::embedding_table(e);
  emit(c, "embedding.json", io::dump(io::embedding_json(e)));
  return 0;
}

int cmd_operator(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const unsigned m = levels_or(c, {e.level()}).front();
  const std::string kind = f.kind.empty() ? "full" : f.kind;
  OperatorMatrix op;
  if (kind == "graph_laplacian") {
    op = build_graph_laplacian(e);
  } else if (kind == "full") {
    op = build_full_L_M(refine(e, m));
  } else if (kind == "replica") {
    op = build_replica_block(e, m).full;
  } else if (kind == "replica_block") {
    op = build_replica_block(e, m).block;
  } else if (kind == "scaled") {
    op = build_scaled_lambda(refine(e, m), f.lambda.value_or(1.0));
  } else {
    throw ConfigError("--kind must be graph_laplacian, full, replica, replica_block or scaled");
  }
  std::cout << to_string(op.kind) << ": " << op.dim() << " x " << op.dim() << ", level " << op.level_m
            << ", ||.||_inf = " << io::fmt(infinity_norm(op.entries), 6) << "\n";
  for (const auto& n : op.notes) std::cout << "note: " << n << "\n";
  if (op.dim() <= 16) std::cout << io::matrix_csv(op.entries);
  emit(c, "operator.csv", io::matrix_csv(op.entries));
  emit(c, "operator.json", io::dump(io::operator_json(op)));
  return 0;
}

int cmd_spectrum(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const bool only_infinity = f.space == "infinity";
  const bool with_infinity = only_infinity || f.space == "all" || (f.space.empty() && c.levels.empty());
  if (!f.space.empty() && f.space != "infinity" && f.space != "all" && f.space != "levels") {
    throw ConfigError("--space must be infinity, levels or all");
  }
  if (with_infinity) {
    const auto s = spectrum_L_infinity(e);
    std::cout << io::spectrum_table("X_infinity: nonzero spectrum of L", s);
    emit(c, "spectrum_infinity.json", io::dump(io::spectrum_json(s)));
  }
  if (only_infinity) return 0;
  for (unsigned m : levels_or(c, {e.level()})) {
    if (m < e.level()) throw ConfigError("level M = " + std::to_string(m) + " is below N");
    const auto predicted = spectrum_L_M_predicted(e, m);
    const auto computed = spectrum_L_M_computed(e, m);
    const double dist = spectrum_distance(predicted.eigenvalues, computed.eigenvalues);
    const std::string tag = "X_" + std::to_string(m);
    std::cout << io::spectrum_table(tag + " predicted", predicted) << io::spectrum_table(tag + " computed", computed)
              << "  max |predicted - computed| = " << io::fmt(dist, 6) << "\n";
    emit(c, "spectrum_M" + std::to_string(m) + ".json",
         io::dump(io::json{{"level", m},
                           {"predicted", io::spectrum_json(predicted)},
                           {"computed", io::spectrum_json(computed)},
                           {"distance", dist}}));
  }
  return 0;
}

int cmd_turing(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const auto model = make_model(c);
  std::vector<SpaceLevel> spaces;
  if (f.space != "infinity") {
    for (unsigned m : levels_or(c, {e.level()})) spaces.push_back(SpaceLevel::level(m));
  }
  if (f.space == "infinity" || f.space == "all" || (f.space.empty() && c.include_infinity)) {
    spaces.push_back(SpaceLevel::infinity());
  }
  const auto rep = turing_check(model, c.eps, c.d, e, spaces, c.guess);
  std::cout << "model " << to_string(model.kind()) << "\n" << io::turing_table(rep);
  emit(c, "turing.json", io::dump(io::turing_json(rep)));
  return 0;
}

SimConfig sim_config(const RunConfig& c, const Flags& f) {
  SimConfig s = c.sim;
  s.eps = c.eps;
  s.d = c.d;
  if (f.t_end) s.t_end = *f.t_end;
  if (f.dt) s.dt = *f.dt;
  if (!f.integrator.empty()) {
    if (f.integrator == "rk4") {
      s.integrator = Integrator::rk4;
    } else if (f.integrator == "exponential_euler") {
      s.integrator = Integrator::exponential_euler;
    } else {
      throw ConfigError("--integrator must be rk4 or exponential_euler");
    }
  }
  return s;
}

int cmd_simulate(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const auto model = make_model(c);
  auto s = sim_config(c, f);
  const unsigned m = !c.levels.empty() ? c.levels.front() : (s.level ? s.level : e.level());
  if (m < e.level()) throw ConfigError("simulation level is below N");
  s.level = m;
  const auto grid = refine(e, m);
  const auto ops = diffusion_pair(build_full_L_M(grid).entries, s.eps, s.d);
  const auto init = initial_condition(model, s, grid, c.guess);
  const auto traj = integrate(model, ops, init, s);
  const auto steady = steady_state(model, c.guess);
  const double delta = s.perturbation.kind == Perturbation::Kind::random_uniform ? s.perturbation.delta
                                                                                  : s.perturbation.amplitude;
  auto rep = pattern_report(traj, grid, steady, delta, model.box());
  if (s.perturbation.kind == Perturbation::Kind::random_uniform) {
    rep.notes.push_back("perturbation: uniform in [-delta, delta] per site (convention, seed " +
                        std::to_string(s.seed) + ")");
  }
  std::cout << "level M = " << m << ", sites = " << grid.size() << ", dt = " << io::fmt(traj.dt, 6)
            << ", t_max = " << io::fmt(traj.t_max, 6) << ", samples = " << traj.states.size() << "\n";
  std::cout << "verdict: " << to_string(rep.verdict) << " (inter-ball " << io::fmt(rep.inter_ball, 6)
            << ", intra-ball " << io::fmt(rep.intra_ball, 6) << ")\n";
  for (const auto& mode : rep.modes) {
    if (mode.fit) {
      std::cout << "  " << mode.label << ": rate " << io::fmt(mode.fit->rate, 6) << " (R^2 " << io::fmt(mode.fit->r2, 6)
                << ")\n";
    }
  }
  emit(c, "trajectory.csv", io::trajectory_csv(traj));
  emit(c, "pattern.json", io::dump(io::pattern_json(rep)));
  if (traj.halted) {
    std::cerr << "integration halted at t = " << io::fmt(traj.t_max, 6) << ": " << traj.halt_reason << "\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_converge(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const auto model = make_model(c);
  const auto s = sim_config(c, f);
  const auto n = e.level();
  const auto table =
      convergence_study(model, e, s.perturbation.datum, levels_or(c, {n, n + 1, n + 2, n + 3}), s);
  std::cout << io::convergence_table(table);
  emit(c, "convergence.json", io::dump(io::convergence_json(table)));
  return 0;
}

int cmd_replica(const Flags& f) {
  const auto c = resolve(f);
  const auto e = load_embedding(c);
  const unsigned m = levels_or(c, {e.level() + 1}).front();
  const auto rep = replica_compare(e, m, c.eps, c.sim.seed, c.replica_times);
  std::cout << io::spectrum_table("full L_M", [&] {
    SpectrumReport r;
    r.eigenvalues = rep.full_spectrum;
    return r;
  }()) << io::spectrum_table("replica block", [&] {
    SpectrumReport r;
    r.eigenvalues = rep.replica_spectrum;
    return r;
  }());
  std::cout << "spectrum distance = " << io::fmt(rep.spectrum_distance, 6) << "\n" << rep.conclusion << "\n";
  emit(c, "replica.json", io::dump(io::replica_json(rep)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic reaction-diffusion on networks"};
  app.require_subcommand(1);
  Flags f;
  int (*handler)(const Flags&) = nullptr;

  auto* embed_cmd = app.add_subcommand("embed", "embed the graph into level-N p-adic balls");
  add_common(embed_cmd, f);
  embed_cmd->callback([&] { handler = cmd_embed; });

  auto* op_cmd = app.add_subcommand("operator", "assemble an operator matrix");
  add_common(op_cmd, f);
  op_cmd->add_option("--kind", f.kind, "graph_laplacian | full | replica | replica_block | scaled");
  op_cmd->add_option("--lambda", f.lambda, "lambda for --kind scaled");
  op_cmd->callback([&] { handler = cmd_operator; });

  auto* spec_cmd = app.add_subcommand("spectrum", "predicted and computed spectra");
  add_common(spec_cmd, f);
  spec_cmd->add_option("--space", f.space, "infinity | levels | all");
  spec_cmd->callback([&] { handler = cmd_spectrum; });

  auto* turing_cmd = app.add_subcommand("turing", "Turing instability analysis per space");
  add_common(turing_cmd, f);
  turing_cmd->add_option("--space", f.space, "infinity | levels | all");
  turing_cmd->callback([&] { handler = cmd_turing; });

  for (auto [name, desc, fn] : {std::tuple{"simulate", "integrate the nonlinear system", cmd_simulate},
                                std::tuple{"converge", "convergence study across levels", cmd_converge}}) {
    auto* cmd = app.add_subcommand(name, desc);
    add_common(cmd, f);
    cmd->add_option("--t-end", f.t_end, "final time");
    cmd->add_option("--dt", f.dt, "time step");
    cmd->add_option("--integrator", f.integrator, "rk4 | exponential_euler");
    cmd->callback([&handler, fn] { handler = fn; });
  }

  auto* replica_cmd = app.add_subcommand("replica", "full L_M versus the replica block matrix");
  add_common(replica_cmd, f);
  replica_cmd->callback([&] { handler = cmd_replica; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  try {
    return handler(f);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
