#include "padicrd/operators.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "padicrd/errors.hpp"

namespace padicrd {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::graph_laplacian: return "graph_laplacian";
    case OperatorKind::full_level_m: return "full_level_M";
    case OperatorKind::replica_block: return "replica_block";
    case OperatorKind::scaled_lambda: return "scaled_lambda";
    case OperatorKind::replica_full: return "replica_full";
  }
  return "unknown";
}

double kernel_eval(const LevelGrid& grid, std::size_t x_site, std::size_t y_site) {
  const auto& emb = grid.embedding();
  const int j = grid.site(x_site).vertex;
  const int k = grid.site(y_site).vertex;
  return static_cast<double>(checked_pow(emb.prime(), emb.level())) * emb.graph().adjacency()(j, k);
}

OperatorMatrix build_graph_laplacian(const NetworkEmbedding& embedding) {
  const auto& a = embedding.graph().adjacency();
  Eigen::MatrixXd l = a.cast<double>();
  for (int i = 0; i < embedding.size(); ++i) l(i, i) -= embedding.degrees()[i];
  return {OperatorKind::graph_laplacian, embedding.prime(), embedding.level(), embedding.level(),
          1.0, false, std::move(l), {}};
}

Eigen::MatrixXd kernel_part(const LevelGrid& grid) {
  const auto& emb = grid.embedding();
  const auto& a = emb.graph().adjacency();
  const auto dim = static_cast<Eigen::Index>(grid.size());
  // p^{N-M}: exact Haar volume ratio of a level-M ball inside a level-N ball.
  const double w = 1.0 / static_cast<double>(grid.sites_per_ball());
  Eigen::MatrixXd k(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const int jv = grid.site(r).vertex;
    for (Eigen::Index c = 0; c < dim; ++c) k(r, c) = w * a(jv, grid.site(c).vertex);
  }
  return k;
}

OperatorMatrix build_full_L_M(const LevelGrid& grid) {
  Eigen::MatrixXd l = kernel_part(grid);
  const auto& deg = grid.embedding().degrees();
  for (Eigen::Index r = 0; r < l.rows(); ++r) l(r, r) -= deg[grid.site(r).vertex];
  const auto& emb = grid.embedding();
  return {OperatorKind::full_level_m, emb.prime(), emb.level(), grid.level(), 1.0, false, std::move(l), {}};
}

ReplicaOperators build_replica_block(const NetworkEmbedding& embedding, unsigned level_m) {
  if (level_m < embedding.level()) throw ArgumentError("replica level M must be >= N");
  const auto copies = checked_pow(embedding.prime(), level_m - embedding.level());
  const double scale = 1.0 / static_cast<double>(copies);
  const int n = embedding.size();
  Eigen::MatrixXd block = scale * embedding.graph().adjacency().cast<double>();
  for (int i = 0; i < n; ++i) block(i, i) -= embedding.degrees()[i];

  const auto dim = static_cast<Eigen::Index>(copies * n);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t c = 0; c < copies; ++c) {
    full.block(static_cast<Eigen::Index>(c * n), static_cast<Eigen::Index>(c * n), n, n) = block;
  }
  OperatorMatrix b{OperatorKind::replica_block, embedding.prime(), embedding.level(), level_m,
                   1.0, false, std::move(block), {}};
  OperatorMatrix f{OperatorKind::replica_full, embedding.prime(), embedding.level(), level_m,
                   1.0, false, std::move(full), {}};
  return {std::move(b), std::move(f)};
}

OperatorMatrix build_scaled_lambda(const LevelGrid& grid, double lambda) {
  Eigen::MatrixXd l = kernel_part(grid);
  const auto& deg = grid.embedding().degrees();
  for (Eigen::Index r = 0; r < l.rows(); ++r) l(r, r) -= lambda * deg[grid.site(r).vertex];
  const auto& emb = grid.embedding();
  OperatorMatrix op{OperatorKind::scaled_lambda, emb.prime(), emb.level(), grid.level(),
                    lambda, false, std::move(l), {}};
  if (lambda < 1.0) {
    op.notes.push_back("lambda < 1: outside the parameter set, positivity of the semigroup is not claimed");
  }
  return op;
}

ScaledSplit scaled_split(const LevelGrid& grid, ScaledParams params) {
  ScaledSplit s;
  s.kernel = params.epsilon * kernel_part(grid);
  s.degree = Eigen::MatrixXd::Zero(s.kernel.rows(), s.kernel.cols());
  const auto& deg = grid.embedding().degrees();
  for (Eigen::Index r = 0; r < s.degree.rows(); ++r) {
    s.degree(r, r) = -params.epsilon * params.lambda * deg[grid.site(r).vertex];
  }
  return s;
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double infinity_norm(const Eigen::MatrixXd& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::MatrixXd semigroup_exp(const Eigen::MatrixXd& op, double epsilon, double t) {
  if (!op.allFinite()) throw NumericalError("semigroup_exp: operator has non-finite entries");
  if (!(t >= 0.0) || !(epsilon > 0.0)) throw ArgumentError("semigroup_exp needs eps > 0 and t >= 0");
  const auto n = op.rows();
  if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);
  if (is_symmetric(op, 0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op);
    if (es.info() != Eigen::Success) throw NumericalError("semigroup_exp: eigensolver failed");
    const Eigen::VectorXd ev = (es.eigenvalues() * (epsilon * t)).array().exp();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }
  Eigen::MatrixXd scaled = (epsilon * t) * op;
  return scaled.exp();
}

Eigen::VectorXd project_P_M(const LevelGrid& grid, const std::function<double(const PAdicCode&)>& phi) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = phi(grid.site(i).code);
  return out;
}

Eigen::VectorXd project_P_M(const LevelGrid& grid, const std::map<PAdicCode, double>& samples) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& code = grid.site(i).code;
    auto it = samples.find(code);
    if (it == samples.end()) throw ArgumentError("P_M: no sample for site " + code.to_string());
    out[i] = it->second;
  }
  return out;
}

Eigen::VectorXd lift(const LevelGrid& coarse, const LevelGrid& fine, const Eigen::VectorXd& values) {
  if (fine.level() < coarse.level()) throw ArgumentError("lift: target grid is coarser");
  Eigen::VectorXd out(static_cast<Eigen::Index>(fine.size()));
  for (std::size_t i = 0; i < fine.size(); ++i) {
    out[i] = values[coarse.locate(fine.site(i).code)];
  }
  return out;
}

Eigen::VectorXd lift_from_vertices(const LevelGrid& grid, const Eigen::VectorXd& vertex_values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = vertex_values[grid.site(i).vertex];
  return out;
}

double digit_weight(const PAdicCode& x) {
  double w = 0.0;
  double scale = 1.0 / x.prime();
  for (auto d : x.digits()) {
    w += d * scale;
    scale /= x.prime();
  }
  return w;
}

}  // namespace padicrd
