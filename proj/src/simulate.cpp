#include "padicrd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "padicrd/kernels.hpp"
#include "padicrd/operators.hpp"

namespace padicrd {

using kernels::RowMatrix;

std::string to_string(Integrator m) { return m == Integrator::rk4 ? "rk4" : "exponential_euler"; }

std::string to_string(PatternVerdict v) {
  switch (v) {
    case PatternVerdict::homogeneous: return "homogeneous";
    case PatternVerdict::clustered: return "clustered";
    case PatternVerdict::sub_clustered: return "sub_clustered";
  }
  return "unknown";
}

DiffusionPair diffusion_pair(const Eigen::MatrixXd& laplacian, double eps, double d) {
  if (!(eps > 0.0) || !(d > 0.0)) throw ArgumentError("diffusivities need eps > 0 and d > 0");
  return {eps * laplacian, (eps * d) * laplacian};
}

double default_dt(const DiffusionPair& ops) {
  const double norm = std::max(infinity_norm(ops.u_op), infinity_norm(ops.v_op));
  return norm > 0.0 ? std::min(1e-3, 0.1 / norm) : 1e-3;
}

namespace {

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

double sup_norm(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd scaled_to(const Eigen::VectorXd& x, double amplitude) {
  const double s = sup_norm(x);
  if (s == 0.0) throw ArgumentError("perturbation direction is the zero vector");
  return x * (amplitude / s);
}

bool in_box(const ValidityBox& box, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!box.contains(u[i], v[i])) return false;
  }
  return true;
}

struct StepPlan {
  std::size_t steps;
  double dt;
};

StepPlan plan_steps(double t_end, double dt) {
  if (!(t_end >= 0.0)) throw ArgumentError("t_end must be >= 0");
  if (!(dt > 0.0)) throw ArgumentError("dt must be > 0");
  if (t_end == 0.0) return {0, dt};
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  return {steps, t_end / static_cast<double>(steps)};
}

// One reaction-plus-diffusion right-hand side evaluation.
class Rhs {
 public:
  Rhs(const KineticsModel& model, const DiffusionPair& ops)
      : du_(ops.u_op), dv_(ops.v_op), reaction_([&model](double u, double v, double& f, double& g) {
          model.reaction(u, v, f, g);
        }) {}

  void operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& v, Eigen::VectorXd& fu,
                  Eigen::VectorXd& gv) const {
    const auto n = static_cast<std::size_t>(u.size());
    fu.resize(u.size());
    gv.resize(v.size());
    std::span<const double> us(u.data(), n), vs(v.data(), n);
    std::span<double> fs(fu.data(), n), gs(gv.data(), n);
    if (n >= 256 && kernels::max_threads() > 1) {
      kernels::reaction_parallel(reaction_, us, vs, fs, gs);
    } else {
      kernels::reaction_serial(reaction_, us, vs, fs, gs);
    }
    kernels::matvec_add(du_, 1.0, us, fs);
    kernels::matvec_add(dv_, 1.0, vs, gs);
  }

 private:
  RowMatrix du_, dv_;
  kernels::PointwiseReaction reaction_;
};

// e^{scale * k * dt * L} for k = 0..steps.
std::vector<RowMatrix> semigroup_table(const Eigen::MatrixXd& laplacian, double scale, double dt,
                                       std::size_t steps) {
  std::vector<RowMatrix> out(steps + 1);
  if (is_symmetric(laplacian, 0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian);
    if (es.info() != Eigen::Success) throw NumericalError("semigroup table: eigensolver failed");
    const auto& q = es.eigenvectors();
    for (std::size_t k = 0; k <= steps; ++k) {
      const Eigen::VectorXd ev = (es.eigenvalues() * (scale * dt * static_cast<double>(k))).array().exp();
      out[k] = q * ev.asDiagonal() * q.transpose();
    }
  } else {
    const Eigen::MatrixXd step = semigroup_exp(laplacian, scale, dt);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(laplacian.rows(), laplacian.cols());
    for (std::size_t k = 0; k <= steps; ++k) {
      out[k] = acc;
      acc = step * acc;
    }
  }
  return out;
}

}  // namespace

SimState initial_condition(const KineticsModel& model, const SimConfig& config, const LevelGrid& grid,
                           std::optional<std::pair<double, double>> guess) {
  const auto [u0, v0] = steady_state(model, guess);
  const auto n = static_cast<Eigen::Index>(grid.size());
  SimState s{0.0, Eigen::VectorXd::Constant(n, u0), Eigen::VectorXd::Constant(n, v0)};
  const auto& pert = config.perturbation;
  const auto& emb = grid.embedding();
  switch (pert.kind) {
    case Perturbation::Kind::none: break;
    case Perturbation::Kind::random_uniform: {
      if (pert.delta < 0.0) throw ArgumentError("perturbation delta must be >= 0");
      if (pert.delta == 0.0) break;
      std::mt19937_64 rng(config.seed);
      std::uniform_real_distribution<double> dist(-pert.delta, pert.delta);
      for (Eigen::Index i = 0; i < n; ++i) s.u[i] += dist(rng);
      for (Eigen::Index i = 0; i < n; ++i) s.v[i] += dist(rng);
      break;
    }
    case Perturbation::Kind::eigenmode: {
      const auto spec = eig_symmetric(build_graph_laplacian(emb).entries);
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(spec.eigenvalues.size()); ++k) {
        if (std::abs(spec.eigenvalues[k] - pert.kappa) < std::abs(spec.eigenvalues[best] - pert.kappa)) best = k;
      }
      if (std::abs(spec.eigenvalues[best] - pert.kappa) > 1e-6) {
        throw ArgumentError("no graph-Laplacian eigenvalue at kappa = " + std::to_string(pert.kappa));
      }
      const Eigen::VectorXd dir = scaled_to(lift_from_vertices(grid, spec.eigenvectors.col(best)), pert.amplitude);
      s.u += dir;
      s.v += dir;
      break;
    }
    case Perturbation::Kind::wavelet: {
      const unsigned r = pert.wavelet_level.value_or(emb.level());
      if (pert.vertex < 0 || pert.vertex >= emb.size()) throw ArgumentError("wavelet vertex out of range");
      const auto center = refine_ball(emb.codes()[pert.vertex], emb.level(), r).front();
      const auto w = kozyrev_wavelet(grid, center, pert.j);
      const Eigen::VectorXd dir = scaled_to(w.coefficients.real(), pert.amplitude);
      s.u += dir;
      s.v += dir;
      break;
    }
    case Perturbation::Kind::sampled: {
      Eigen::VectorXd dir;
      if (pert.datum.kind == ContinuousDatum::Kind::digit_weight) {
        dir = pert.datum.amplitude *
              (project_P_M(grid, [](const PAdicCode& x) { return digit_weight(x); }).array() - 0.5).matrix();
      } else {
        if (static_cast<int>(pert.datum.vertex_values.size()) != emb.size()) {
          throw ArgumentError("vertex_constant datum needs one value per vertex");
        }
        dir = lift_from_vertices(grid, Eigen::Map<const Eigen::VectorXd>(pert.datum.vertex_values.data(),
                                                                         emb.size()));
      }
      s.u += dir;
      s.v += dir;
      break;
    }
  }
  if (!in_box(model.box(), s.u, s.v)) throw ArgumentError("perturbed initial state leaves the validity box");
  return s;
}

Trajectory integrate(const KineticsModel& model, const DiffusionPair& ops, const SimState& initial,
                     const SimConfig& config) {
  const auto n = initial.u.size();
  if (ops.u_op.rows() != n || ops.v_op.rows() != n || initial.v.size() != n) {
    throw ArgumentError("integrate: operator and state dimensions differ");
  }
  const auto plan = plan_steps(config.t_end, config.dt > 0.0 ? config.dt : default_dt(ops));
  const double dt = plan.dt;
  const std::size_t stride = std::max<std::size_t>(1, config.stride);

  Trajectory traj;
  traj.dt = dt;
  traj.states.push_back(initial);
  SimState cur = initial;

  const Rhs rhs(model, ops);
  Eigen::VectorXd k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, tu, tv, fu, gv;
  RowMatrix eu, ev;
  if (config.integrator == Integrator::exponential_euler) {
    eu = semigroup_exp(ops.u_op, 1.0, dt);
    ev = semigroup_exp(ops.v_op, 1.0, dt);
  }
  const kernels::PointwiseReaction reaction = [&model](double u, double v, double& f, double& g) {
    model.reaction(u, v, f, g);
  };

  for (std::size_t step = 1; step <= plan.steps; ++step) {
    SimState next{initial.t + static_cast<double>(step) * dt, {}, {}};
    if (config.integrator == Integrator::rk4) {
      rhs(cur.u, cur.v, k1u, k1v);
      tu = cur.u + 0.5 * dt * k1u;
      tv = cur.v + 0.5 * dt * k1v;
      rhs(tu, tv, k2u, k2v);
      tu = cur.u + 0.5 * dt * k2u;
      tv = cur.v + 0.5 * dt * k2v;
      rhs(tu, tv, k3u, k3v);
      tu = cur.u + dt * k3u;
      tv = cur.v + dt * k3v;
      rhs(tu, tv, k4u, k4v);
      next.u = cur.u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      next.v = cur.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } else {
      fu.resize(n);
      gv.resize(n);
      const auto sz = static_cast<std::size_t>(n);
      kernels::reaction_serial(reaction, {cur.u.data(), sz}, {cur.v.data(), sz}, {fu.data(), sz},
                               {gv.data(), sz});
      next.u = dt * fu;
      next.v = dt * gv;
      kernels::matvec_add(eu, 1.0, {cur.u.data(), sz}, {next.u.data(), sz});
      kernels::matvec_add(ev, 1.0, {cur.v.data(), sz}, {next.v.data(), sz});
    }

    if (!next.u.allFinite() || !next.v.allFinite()) {
      throw IntegrationError("integration produced NaN/Inf at t = " + std::to_string(next.t), cur);
    }
    cur = std::move(next);
    const bool blowup = std::max(sup_norm(cur.u), sup_norm(cur.v)) > config.blowup_norm;
    const bool left_box = config.enforce_box && !in_box(model.box(), cur.u, cur.v);
    if (blowup || left_box) {
      traj.halted = true;
      traj.halt_reason = blowup ? "blow-up: sup norm exceeded " + std::to_string(config.blowup_norm)
                                : "state left the validity box";
      traj.states.push_back(cur);
      traj.t_max = cur.t;
      return traj;
    }
    if (step % stride == 0 || step == plan.steps) traj.states.push_back(cur);
  }
  traj.t_max = cur.t;
  return traj;
}

PicardReport picard_verify(const KineticsModel& model, const Eigen::MatrixXd& laplacian, const SimState& initial,
                           const SimConfig& config, int iterations) {
  if (iterations < 1) throw ArgumentError("picard_verify needs at least one iteration");
  const auto ops = diffusion_pair(laplacian, config.eps, config.d);
  const auto plan = plan_steps(config.t_end, config.dt > 0.0 ? config.dt : default_dt(ops));
  const std::size_t nodes = plan.steps + 1;
  const auto fu_table = semigroup_table(laplacian, config.eps, plan.dt, plan.steps);
  const auto fv_table = semigroup_table(laplacian, config.eps * config.d, plan.dt, plan.steps);

  std::vector<Eigen::VectorXd> lin_u(nodes), lin_v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    lin_u[i] = fu_table[i] * initial.u;
    lin_v[i] = fv_table[i] * initial.v;
  }
  std::vector<Eigen::VectorXd> cur_u = lin_u, cur_v = lin_v;
  std::vector<Eigen::VectorXd> force_u(nodes), force_v(nodes), conv_u(nodes), conv_v(nodes);

  PicardReport rep;
  for (int k = 1; k <= iterations; ++k) {
    for (std::size_t m = 0; m < nodes; ++m) {
      force_u[m].resize(initial.u.size());
      force_v[m].resize(initial.v.size());
      for (Eigen::Index i = 0; i < initial.u.size(); ++i) {
        model.reaction(cur_u[m][i], cur_v[m][i], force_u[m][i], force_v[m][i]);
      }
    }
    kernels::trapezoid_convolution_parallel(fu_table, force_u, plan.dt, conv_u);
    kernels::trapezoid_convolution_parallel(fv_table, force_v, plan.dt, conv_v);
    double inc = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      Eigen::VectorXd nu = lin_u[i] + conv_u[i];
      Eigen::VectorXd nv = lin_v[i] + conv_v[i];
      inc = std::max({inc, sup_norm(nu - cur_u[i]), sup_norm(nv - cur_v[i])});
      cur_u[i] = std::move(nu);
      cur_v[i] = std::move(nv);
    }
    if (!std::isfinite(inc)) throw NumericalError("Picard iteration produced NaN/Inf");
    rep.increments.push_back(inc);
  }
  for (std::size_t k = 1; k < rep.increments.size(); ++k) {
    if (!(rep.increments[k] < rep.increments[k - 1])) rep.contracting = false;
  }
  if (rep.increments.size() > 1 && rep.increments.back() > rep.increments.front()) {
    throw NumericalError("Picard iteration does not converge: increments grow");
  }

  SimConfig direct = config;
  direct.integrator = Integrator::rk4;
  direct.dt = plan.dt;
  direct.stride = 1;
  direct.enforce_box = false;
  const auto traj = integrate(model, ops, initial, direct);
  for (std::size_t i = 0; i < std::min(nodes, traj.states.size()); ++i) {
    rep.deviation = std::max({rep.deviation, sup_norm(traj.states[i].u - cur_u[i]),
                              sup_norm(traj.states[i].v - cur_v[i])});
  }
  rep.u_final = cur_u.back();
  rep.v_final = cur_v.back();
  return rep;
}

ConvergenceTable convergence_study(const KineticsModel& model, const NetworkEmbedding& embedding,
                                   const ContinuousDatum& datum, std::vector<unsigned> levels, SimConfig config) {
  if (levels.empty()) throw ArgumentError("convergence_study needs at least one level");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.front() < embedding.level()) throw ArgumentError("levels must be >= N");
  const unsigned finest = levels.back();
  const LevelGrid fine_grid = refine(embedding, finest);
  if (config.dt <= 0.0) {
    config.dt = default_dt(diffusion_pair(build_full_L_M(fine_grid).entries, config.eps, config.d));
  }
  config.perturbation = Perturbation{};
  config.perturbation.kind = Perturbation::Kind::sampled;
  config.perturbation.datum = datum;

  std::vector<Trajectory> runs(levels.size());
  std::vector<std::exception_ptr> errors(levels.size());
  const auto count = static_cast<std::ptrdiff_t>(levels.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const LevelGrid grid = refine(embedding, levels[i]);
      const auto ops = diffusion_pair(build_full_L_M(grid).entries, config.eps, config.d);
      runs[i] = integrate(model, ops, initial_condition(model, config, grid), config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].halted) {
      throw NumericalError("convergence_study: level " + std::to_string(levels[i]) + " halted (" +
                           runs[i].halt_reason + ")");
    }
  }

  ConvergenceTable table;
  table.finest_level = finest;
  const auto& reference = runs.back().states;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelGrid grid = refine(embedding, levels[i]);
    ConvergenceRow row{levels[i], 0.0, 0.0};
    for (std::size_t s = 0; s < reference.size(); ++s) {
      const auto& st = runs[i].states[s];
      const double dist = std::max(sup_norm(lift(grid, fine_grid, st.u) - reference[s].u),
                                   sup_norm(lift(grid, fine_grid, st.v) - reference[s].v));
      row.gap = std::max(row.gap, dist);
      if (s == 0) row.projection_error = dist;
    }
    table.rows.push_back(row);
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].gap > 1.05 * table.rows[i - 1].gap + 1e-15) table.non_increasing = false;
  }
  return table;
}

ReplicaReport replica_compare(const NetworkEmbedding& embedding, unsigned level_m, double eps, std::uint64_t seed,
                              std::vector<double> times) {
  if (level_m <= embedding.level()) throw ArgumentError("replica_compare needs M > N");
  if (!(eps > 0.0)) throw ArgumentError("replica_compare needs eps > 0");
  ReplicaReport rep;
  rep.level_n = embedding.level();
  rep.level_m = level_m;
  const LevelGrid grid = refine(embedding, level_m);
  const auto full = build_full_L_M(grid).entries;
  const auto replica = build_replica_block(embedding, level_m);
  rep.full_spectrum = eig_symmetric(full).eigenvalues;
  rep.replica_spectrum = eig_symmetric(replica.full.entries).eigenvalues;
  rep.spectrum_distance = spectrum_distance(rep.full_spectrum, rep.replica_spectrum);
  rep.identification_supported = rep.spectrum_distance <= 1e-9;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(grid.size()));
  for (auto& xi : x) xi = dist(rng);
  Eigen::VectorXd z(embedding.size());
  for (auto& zi : z) zi = dist(rng);
  const Eigen::VectorXd y = lift_from_vertices(grid, z);
  const auto l_n = build_graph_laplacian(embedding).entries;

  rep.times = times;
  for (double t : times) {
    const Eigen::VectorXd a = semigroup_exp(full, eps, t) * x;
    const Eigen::VectorXd b = semigroup_exp(replica.full.entries, eps, t) * x;
    rep.trajectory_distance.push_back((a - b).cwiseAbs().maxCoeff());
    const Eigen::VectorXd nested = semigroup_exp(full, eps, t) * y;
    const Eigen::VectorXd coarse = lift_from_vertices(grid, semigroup_exp(l_n, eps, t) * z);
    rep.nesting_error = std::max(rep.nesting_error, (nested - coarse).cwiseAbs().maxCoeff());
  }

  // eps' L_{N,lambda} with eps' = p^{N-M} eps and lambda = p^{M-N}.
  const LevelGrid base = refine(embedding, embedding.level());
  const double lambda = static_cast<double>(grid.sites_per_ball());
  const double eps_prime = eps / lambda;
  const Eigen::MatrixXd scaled = eps_prime * build_scaled_lambda(base, lambda).entries;
  rep.replica_block_identity_error = (scaled - eps * replica.block.entries).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd restricted = eps * l_n;
  rep.scaled_diagonal_error = (scaled.diagonal() - restricted.diagonal()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd off = scaled - restricted;
  off.diagonal().setZero();
  rep.scaled_offdiag_error = off.cwiseAbs().maxCoeff();

  rep.conclusion = rep.identification_supported
                       ? "full L_M and the replica block matrix have the same spectrum"
                       : "block-diagonal replica identification is numerically unsupported: the spectra of the "
                         "full L_M and of the replica block matrix differ, so no renaming of the basis relates them";
  return rep;
}

std::optional<GrowthFit> fit_growth_rate(const std::vector<double>& t, const std::vector<double>& amplitude,
                                         double lo, double hi) {
  std::size_t begin = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (amplitude[i] >= lo && amplitude[i] <= hi) {
      begin = i;
      break;
    }
  }
  if (begin == t.size()) return std::nullopt;
  std::size_t end = begin;
  while (end < t.size() && amplitude[end] >= lo && amplitude[end] <= hi) ++end;
  const std::size_t n = end - begin;
  if (n < 3) return std::nullopt;

  double st = 0, sy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    st += t[i];
    sy += std::log(amplitude[i]);
  }
  const double mt = st / n, my = sy / n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt = t[i] - mt, dy = std::log(amplitude[i]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) return std::nullopt;
  GrowthFit fit;
  fit.rate = sty / stt;
  fit.intercept = my - fit.rate * mt;
  fit.r2 = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  fit.t_begin = t[begin];
  fit.t_end = t[end - 1];
  fit.points = n;
  return fit;
}

PatternReport pattern_report(const Trajectory& trajectory, const LevelGrid& grid, std::pair<double, double> steady,
                             double delta, const ValidityBox& box) {
  if (trajectory.states.empty()) throw ArgumentError("pattern_report: empty trajectory");
  const auto& emb = grid.embedding();
  PatternReport rep;
  for (const auto& s : trajectory.states) rep.times.push_back(s.t);

  struct Projector {
    std::string label;
    double kappa;
    Eigen::MatrixXcd basis;  // orthonormal columns on the grid
  };
  std::vector<Projector> projectors;
  const auto graph = eig_symmetric(build_graph_laplacian(emb).entries);
  const double lift_norm = std::sqrt(static_cast<double>(grid.sites_per_ball()));
  std::size_t k = 0;
  for (const auto& g : graph.grouped()) {
    Projector pr{"graph kappa=" + short_number(g.value), g.value,
                 Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.size()), g.multiplicity)};
    for (int c = 0; c < g.multiplicity; ++c, ++k) {
      pr.basis.col(c) = (lift_from_vertices(grid, graph.eigenvectors.col(static_cast<Eigen::Index>(k))) / lift_norm)
                            .cast<std::complex<double>>();
    }
    projectors.push_back(std::move(pr));
  }
  if (grid.level() > emb.level()) {
    const auto family = wavelet_family(grid);
    for (int v = 0; v < emb.size(); ++v) {
      std::vector<Eigen::VectorXcd> cols;
      for (const auto& w : family) {
        if (w.vertex == v) cols.push_back(w.coefficients / w.coefficients.norm());
      }
      Projector pr{"wavelet vertex=" + std::to_string(v), -static_cast<double>(emb.degrees()[v]),
                   Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(cols.size()))};
      for (std::size_t c = 0; c < cols.size(); ++c) pr.basis.col(static_cast<Eigen::Index>(c)) = cols[c];
      projectors.push_back(std::move(pr));
    }
  }

  const double lo = std::max(10.0 * delta, 1e-12);
  const double hi = 0.1 * box.width();
  for (const auto& pr : projectors) {
    ModeSeries series{pr.label, pr.kappa, {}, std::nullopt};
    for (const auto& s : trajectory.states) {
      const Eigen::VectorXcd w = (s.u.array() - steady.first).matrix().cast<std::complex<double>>();
      series.amplitude.push_back((pr.basis.adjoint() * w).norm());
    }
    if (std::abs(pr.kappa) > 1e-9) series.fit = fit_growth_rate(rep.times, series.amplitude, lo, hi);
    rep.modes.push_back(std::move(series));
  }

  const auto& last = trajectory.states.back();
  const auto per = static_cast<Eigen::Index>(grid.sites_per_ball());
  for (int v = 0; v < emb.size(); ++v) {
    const auto seg_u = last.u.segment(v * per, per);
    const auto seg_v = last.v.segment(v * per, per);
    rep.cluster_u.push_back(seg_u.mean());
    rep.cluster_v.push_back(seg_v.mean());
    rep.intra_ball = std::max({rep.intra_ball, seg_u.maxCoeff() - seg_u.minCoeff(),
                               seg_v.maxCoeff() - seg_v.minCoeff()});
  }
  for (int a = 0; a < emb.size(); ++a) {
    for (int b = a + 1; b < emb.size(); ++b) {
      rep.inter_ball = std::max({rep.inter_ball, std::abs(rep.cluster_u[a] - rep.cluster_u[b]),
                                 std::abs(rep.cluster_v[a] - rep.cluster_v[b])});
    }
  }
  rep.clusters = emb.size();
  constexpr double kFlat = 1e-8;
  if (rep.inter_ball > kFlat && rep.inter_ball > 100.0 * rep.intra_ball) {
    rep.verdict = PatternVerdict::clustered;
  } else if (rep.intra_ball > kFlat) {
    rep.verdict = PatternVerdict::sub_clustered;
  } else {
    rep.verdict = PatternVerdict::homogeneous;
  }
  if (trajectory.halted) rep.notes.push_back("trajectory halted early: " + trajectory.halt_reason);
  return rep;
}

}  // namespace padicrd
