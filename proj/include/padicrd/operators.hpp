#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "padicrd/network.hpp"

namespace padicrd {

enum class OperatorKind { graph_laplacian, full_level_m, replica_block, scaled_lambda, replica_full };

std::string to_string(OperatorKind kind);

/**
 * Dense matrix of one member of the operator hierarchy, indexed by the
 * canonical LevelGrid order (vertex-major, offset-minor).
 */
struct OperatorMatrix {
  OperatorKind kind;
  std::uint32_t p;
  unsigned level_n;
  unsigned level_m;
  double lambda = 1.0;
  bool epsilon_applied = false;
  Eigen::MatrixXd entries;
  std::vector<std::string> notes;

  Eigen::Index dim() const { return entries.rows(); }
};

// Element of the parameter set {eps > 0, lambda >= 1}.
struct ScaledParams {
  double epsilon;
  double lambda;

  bool admissible() const { return epsilon > 0.0 && lambda >= 1.0; }
  // Monoid action sigma . (eps, lambda) = (sigma eps, lambda / sigma).
  ScaledParams act(double sigma) const { return {sigma * epsilon, lambda / sigma}; }
};

// J_N(x, y) for two grid sites: p^N A_{JK} where J, K are their level-N balls.
double kernel_eval(const LevelGrid& grid, std::size_t x_site, std::size_t y_site);

// [A_{JI} - gamma_I delta_{JI}], n x n.
OperatorMatrix build_graph_laplacian(const NetworkEmbedding& embedding);

// [p^{N-M} A_{JI} - gamma_I delta_{J_j I_j}] over the level-M grid.
OperatorMatrix build_full_L_M(const LevelGrid& grid);

struct ReplicaOperators {
  OperatorMatrix block;  // p^{N-M} A - Gamma, n x n
  OperatorMatrix full;   // p^{M-N} copies of `block` on the diagonal
};

ReplicaOperators build_replica_block(const NetworkEmbedding& embedding, unsigned level_m);

// Kernel part of L_M with the diagonal replaced by -lambda gamma_I. lambda < 1
// is accepted with a note; positivity is not claimed in that range.
OperatorMatrix build_scaled_lambda(const LevelGrid& grid, double lambda);

// Kernel (integral) part of the level-M operator, i.e. L_M + Gamma.
Eigen::MatrixXd kernel_part(const LevelGrid& grid);

// Split of eps * L_lambda into its kernel and degree parts, used by the monoid identity.
struct ScaledSplit {
  Eigen::MatrixXd kernel;  // eps * p^{N-M} A-part
  Eigen::MatrixXd degree;  // -eps * lambda * Gamma (diagonal)
};
ScaledSplit scaled_split(const LevelGrid& grid, ScaledParams params);

// e^{t eps op}. Symmetric inputs use the eigendecomposition; others use
// scaling-and-squaring with a Pade approximant.
Eigen::MatrixXd semigroup_exp(const Eigen::MatrixXd& op, double epsilon, double t);

// P_M: point samples at the level-M ball centres, in canonical order.
Eigen::VectorXd project_P_M(const LevelGrid& grid, const std::function<double(const PAdicCode&)>& phi);
Eigen::VectorXd project_P_M(const LevelGrid& grid, const std::map<PAdicCode, double>& samples);

// Level-M vector seen as a function on the finer grid (constant on level-M balls).
Eigen::VectorXd lift(const LevelGrid& coarse, const LevelGrid& fine, const Eigen::VectorXd& values);

// Per-ball values repeated over the level-M sites of each ball.
Eigen::VectorXd lift_from_vertices(const LevelGrid& grid, const Eigen::VectorXd& vertex_values);

// w(x) = sum_i digits(x)[i] p^{-i-1}.
double digit_weight(const PAdicCode& x);

// Max absolute row sum.
double infinity_norm(const Eigen::MatrixXd& m);

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12);

}  // namespace padicrd
