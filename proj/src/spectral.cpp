#include "padicrd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "padicrd/errors.hpp"
#include "padicrd/operators.hpp"

namespace padicrd {

std::string to_string(SpectrumSource s) {
  switch (s) {
    case SpectrumSource::graph: return "graph";
    case SpectrumSource::L_infinity_predicted: return "L_infinity_predicted";
    case SpectrumSource::L_M_predicted: return "L_M_predicted";
    case SpectrumSource::L_M_computed: return "L_M_computed";
    case SpectrumSource::matrix: return "matrix";
  }
  return "unknown";
}

std::vector<EigenvalueGroup> SpectrumReport::grouped(double tol) const {
  std::vector<EigenvalueGroup> out;
  for (double v : eigenvalues) {
    if (!out.empty() && std::abs(out.back().value - v) <= tol) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

SpectrumReport eig_symmetric(const Eigen::MatrixXd& m) {
  if (!is_symmetric(m, 1e-12)) throw ArgumentError("eig_symmetric: matrix is not symmetric");
  const auto n = m.rows();
  SpectrumReport rep;
  if (n == 0) return rep;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eig_symmetric: no convergence");

  Eigen::MatrixXd vecs = es.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(vecs(i, k)) > 1e-12) {
        if (vecs(i, k) < 0) vecs.col(k) *= -1.0;
        break;
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals[a] != vals[b]) return vals[a] < vals[b];
    return std::lexicographical_compare(vecs.col(a).data(), vecs.col(a).data() + n,
                                        vecs.col(b).data(), vecs.col(b).data() + n);
  });

  rep.eigenvectors.resize(n, n);
  rep.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    rep.eigenvalues[k] = vals[order[k]];
    rep.eigenvectors.col(k) = vecs.col(order[k]);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXd r = m * rep.eigenvectors.col(k) - rep.eigenvalues[k] * rep.eigenvectors.col(k);
    rep.residual_max = std::max(rep.residual_max, r.cwiseAbs().maxCoeff());
  }
  return rep;
}

namespace {

void require_undirected(const NetworkEmbedding& e) {
  if (!e.graph().is_undirected_simple()) {
    throw ArgumentError("spectral analysis requires a symmetric adjacency matrix with zero diagonal");
  }
}

}  // namespace

SpectrumReport spectrum_L_infinity(const NetworkEmbedding& embedding) {
  require_undirected(embedding);
  const auto graph = eig_symmetric(build_graph_laplacian(embedding).entries);
  SpectrumReport rep;
  rep.source = SpectrumSource::L_infinity_predicted;
  for (double mu : graph.eigenvalues) {
    if (std::abs(mu) > 1e-9) rep.eigenvalues.push_back(mu);
  }
  for (int g : embedding.degrees()) {
    if (g != 0) rep.eigenvalues.push_back(-static_cast<double>(g));
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.residual_max = graph.residual_max;
  rep.notes.push_back(
      "each -gamma_I has infinite multiplicity in L^2(K_N); in X_M it appears (p-1) times per "
      "level-R sub-ball, N <= R < M, i.e. p^{M-N} - 1 times per vertex");
  return rep;
}

SpectrumReport spectrum_L_M_predicted(const NetworkEmbedding& embedding, unsigned level_m) {
  require_undirected(embedding);
  if (level_m < embedding.level()) throw ArgumentError("level M must be >= N");
  const auto graph = eig_symmetric(build_graph_laplacian(embedding).entries);
  SpectrumReport rep;
  rep.source = SpectrumSource::L_M_predicted;
  rep.eigenvalues = graph.eigenvalues;
  const auto extra = checked_pow(embedding.prime(), level_m - embedding.level()) - 1;
  for (int g : embedding.degrees()) {
    rep.eigenvalues.insert(rep.eigenvalues.end(), extra, -static_cast<double>(g));
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.residual_max = graph.residual_max;
  return rep;
}

SpectrumReport spectrum_L_M_computed(const NetworkEmbedding& embedding, unsigned level_m) {
  require_undirected(embedding);
  auto rep = eig_symmetric(build_full_L_M(refine(embedding, level_m)).entries);
  rep.source = SpectrumSource::L_M_computed;
  return rep;
}

double spectrum_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

WaveletVector kozyrev_wavelet(const LevelGrid& grid, int vertex, std::uint32_t j) {
  const auto& emb = grid.embedding();
  if (vertex < 0 || vertex >= emb.size()) throw ArgumentError("wavelet vertex out of range");
  return kozyrev_wavelet(grid, emb.codes()[vertex], j);
}

WaveletVector kozyrev_wavelet(const LevelGrid& grid, const PAdicCode& center, std::uint32_t j) {
  const auto& emb = grid.embedding();
  const auto p = emb.prime();
  const unsigned r = center.precision();
  if (r < emb.level()) throw ArgumentError("wavelet ball must lie inside a vertex ball (R >= N)");
  if (grid.level() < r + 1) {
    throw ArgumentError("wavelet at ball level " + std::to_string(r) +
                        " is not representable on a level-" + std::to_string(grid.level()) + " grid");
  }
  if (j < 1 || j >= p) throw ArgumentError("wavelet index j must lie in {1, ..., p-1}");
  const int vertex = emb.vertex_of(center);
  if (vertex < 0) throw ArgumentError("wavelet centre lies outside K_N");

  const double amplitude = std::pow(static_cast<double>(p), 0.5 * r);
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& code = grid.site(i).code;
    if (!ball_contains(center, r, code)) continue;
    const auto [c, s] = character_eval(fractional_part_scaled(code, j, r));
    coef[static_cast<Eigen::Index>(i)] = {amplitude * c, amplitude * s};
  }
  return {vertex, j, r, center, std::move(coef)};
}

std::vector<WaveletVector> wavelet_family(const LevelGrid& grid) {
  const auto& emb = grid.embedding();
  std::vector<WaveletVector> out;
  for (int v = 0; v < emb.size(); ++v) {
    for (unsigned r = emb.level(); r < grid.level(); ++r) {
      for (const auto& center : refine_ball(emb.codes()[v], emb.level(), r)) {
        for (std::uint32_t j = 1; j < emb.prime(); ++j) out.push_back(kozyrev_wavelet(grid, center, j));
      }
    }
  }
  return out;
}

}  // namespace padicrd
