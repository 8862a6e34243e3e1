#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "padicrd/errors.hpp"
#include "padicrd/kinetics.hpp"
#include "padicrd/network.hpp"
#include "padicrd/spectral.hpp"

namespace padicrd {

enum class Integrator { rk4, exponential_euler };

std::string to_string(Integrator m);

// Continuous initial datum on K_N, sampled through P_M.
struct ContinuousDatum {
  enum class Kind { digit_weight, vertex_constant };
  Kind kind = Kind::digit_weight;
  double amplitude = 0.5;              // u = u0 + amplitude (w(x) - 1/2), same for v
  std::vector<double> vertex_values;   // vertex_constant: offsets per level-N ball
};

struct Perturbation {
  enum class Kind { none, random_uniform, eigenmode, wavelet, sampled };
  Kind kind = Kind::random_uniform;
  double delta = 1e-4;   // random_uniform: entries uniform in [-delta, delta]
  double amplitude = 1e-3;  // eigenmode / wavelet: sup norm of the added vector
  double kappa = 0.0;    // eigenmode: graph-Laplacian eigenvalue selecting the vector
  int vertex = 0;        // wavelet
  std::uint32_t j = 1;   // wavelet
  std::optional<unsigned> wavelet_level;  // wavelet ball level R, default N
  ContinuousDatum datum;  // sampled
};

struct SimConfig {
  unsigned level = 0;  // M; 0 means "use the embedding level N"
  double eps = 1.0;
  double d = 1.0;
  Integrator integrator = Integrator::rk4;
  double dt = 0.0;     // <= 0: min(1e-3, 0.1 / ||eps d L||_inf)
  double t_end = 1.0;
  std::size_t stride = 1;  // keep every stride-th step (the final state is always kept)
  std::uint64_t seed = 0;
  Perturbation perturbation;
  double blowup_norm = 1e6;
  bool enforce_box = true;
};

struct SimState {
  double t = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

struct Trajectory {
  std::vector<SimState> states;
  double dt = 0.0;
  bool halted = false;   // blow-up or box exit before t_end
  std::string halt_reason;
  double t_max = 0.0;    // last time reached
};

// Raised when a step produces NaN/Inf; carries the last finite state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, SimState last) : NumericalError(what), last_(std::move(last)) {}
  const SimState& last_good_state() const { return last_; }

 private:
  SimState last_;
};

// eps L for u and eps d L for v.
struct DiffusionPair {
  Eigen::MatrixXd u_op;
  Eigen::MatrixXd v_op;
};

DiffusionPair diffusion_pair(const Eigen::MatrixXd& laplacian, double eps, double d);

double default_dt(const DiffusionPair& ops);

SimState initial_condition(const KineticsModel& model, const SimConfig& config, const LevelGrid& grid,
                           std::optional<std::pair<double, double>> guess = {});

// Joint (u, v) integration of du/dt = f + eps L u, dv/dt = g + eps d L v.
Trajectory integrate(const KineticsModel& model, const DiffusionPair& ops, const SimState& initial,
                     const SimConfig& config);

struct PicardReport {
  double deviation = 0.0;            // sup_t ||picard_K - integrate()||_inf
  std::vector<double> increments;    // ||iterate_k - iterate_{k-1}||, k = 1..K
  bool contracting = true;           // increments strictly decreasing
  Eigen::VectorXd u_final, v_final;  // K-th iterate at t_end
};

/**
 * Picard iteration of the mild-solution equations
 *   u_{k+1}(t) = e^{eps t L} u(0) + int_0^t e^{eps (t-s) L} f(u_k, v_k)(s) ds
 * (and the v analogue with eps d), starting from the linear evolution. The
 * convolution is the composite trapezoid on the dt mesh with exact semigroup
 * factors. Throws NumericalError if the increments blow up.
 */
PicardReport picard_verify(const KineticsModel& model, const Eigen::MatrixXd& laplacian, const SimState& initial,
                           const SimConfig& config, int iterations);

struct ConvergenceRow {
  unsigned level;
  double gap;               // sup_t ||lift(u_M, v_M) - (u_fine, v_fine)||_inf
  double projection_error;  // same distance at t = 0
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  unsigned finest_level = 0;
  bool non_increasing = true;  // gap(M_{k+1}) <= 1.05 gap(M_k)
};

// Integrates the datum at each level (levels run concurrently) and measures
// every level against the finest one on the finest grid.
ConvergenceTable convergence_study(const KineticsModel& model, const NetworkEmbedding& embedding,
                                   const ContinuousDatum& datum, std::vector<unsigned> levels, SimConfig config);

struct ReplicaReport {
  unsigned level_n = 0, level_m = 0;
  std::vector<double> full_spectrum;
  std::vector<double> replica_spectrum;
  double spectrum_distance = 0.0;
  bool identification_supported = false;
  std::vector<double> times;
  std::vector<double> trajectory_distance;  // ||e^{t eps L_M} x - e^{t eps A^(M)} x||_inf
  double nesting_error = 0.0;     // ball-constant data: L_M evolution vs L_N evolution
  double replica_block_identity_error = 0.0;  // eps' L_{N,lambda} - eps A_{N;M}
  double scaled_diagonal_error = 0.0;  // diag of eps' L_{N,lambda} vs diag of eps L_N
  double scaled_offdiag_error = 0.0;   // off-diagonal of the same pair
  std::string conclusion;
};

ReplicaReport replica_compare(const NetworkEmbedding& embedding, unsigned level_m, double eps,
                              std::uint64_t seed = 0, std::vector<double> times = {0.1, 0.5, 1.0, 2.0});

struct GrowthFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double t_begin = 0.0, t_end = 0.0;
  std::size_t points = 0;
};

// Least squares on log(amplitude) over the first contiguous run of samples
// with amplitude in [lo, hi]; std::nullopt when fewer than 3 samples qualify.
std::optional<GrowthFit> fit_growth_rate(const std::vector<double>& t, const std::vector<double>& amplitude,
                                         double lo, double hi);

enum class PatternVerdict { homogeneous, clustered, sub_clustered };

std::string to_string(PatternVerdict v);

struct ModeSeries {
  std::string label;  // "graph kappa=-4" or "wavelet vertex=0"
  double kappa;
  std::vector<double> amplitude;
  std::optional<GrowthFit> fit;
};

struct PatternReport {
  std::vector<double> cluster_u, cluster_v;  // per level-N ball means of the final state
  std::vector<double> times;
  std::vector<ModeSeries> modes;
  double inter_ball = 0.0;  // max difference of ball means
  double intra_ball = 0.0;  // max spread within a ball
  PatternVerdict verdict = PatternVerdict::homogeneous;
  int clusters = 0;
  std::vector<std::string> notes;
};

/// Mode projections use the graph-Laplacian eigenvectors (lifted to the grid)
/// and, for M > N, the Kozyrev wavelets of each vertex ball.
PatternReport pattern_report(const Trajectory& trajectory, const LevelGrid& grid,
                             std::pair<double, double> steady, double delta, const ValidityBox& box);

}  // namespace padicrd
