#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "padicrd/padic.hpp"

namespace padicrd {

/// Unweighted graph given by a 0/1 adjacency matrix.
class Graph {
 public:
  explicit Graph(Eigen::MatrixXi adjacency, std::vector<std::string> labels = {});

  // Undirected graph on n vertices from an edge list (each edge set both ways).
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                          std::vector<std::string> labels = {});
  static Graph complete(int n);
  static Graph path(int n);
  static Graph cycle(int n);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool is_symmetric() const;
  bool has_zero_diagonal() const;
  // Symmetric with zero diagonal: the standing assumption of the spectral theory.
  bool is_undirected_simple() const { return is_symmetric() && has_zero_diagonal(); }

  // gamma_I = row sums of the adjacency matrix.
  std::vector<int> degrees() const;
  int edge_count() const;
  int connected_components() const;

 private:
  Eigen::MatrixXi adjacency_;
  std::vector<std::string> labels_;
};

struct GraphLoadOptions {
  bool strict = false;  // reject self-loops
};

// Optional embedding hints carried by a graph document ({"p": .., "N": ..}).
struct GraphDocument {
  Graph graph;
  std::optional<std::uint32_t> p;
  std::optional<unsigned> level;
};

// Plain edge list: one "i j" pair per line, 0-based, '#' starts a comment.
GraphDocument parse_edge_list(const std::string& text, GraphLoadOptions opts = {});

// Structured document: {n, edges: [[i, j], ...] | adjacency: [[...]], labels?, p?, N?, directed?}.
GraphDocument parse_graph_json(const std::string& text, GraphLoadOptions opts = {});

// Dispatches on content: a leading '{' selects the structured format.
GraphDocument load_graph(const std::filesystem::path& path, GraphLoadOptions opts = {});

/**
 * Vertices of a graph placed in disjoint level-N balls of Z_p.
 *
 * Vertex k receives the base-p expansion of k at precision N, so K_N is the
 * union of the balls k + p^N Z_p, k = 0..n-1.
 */
class NetworkEmbedding {
 public:
  NetworkEmbedding(Graph graph, std::uint32_t p, unsigned level);

  const Graph& graph() const { return graph_; }
  std::uint32_t prime() const { return p_; }
  unsigned level() const { return level_; }
  int size() const { return graph_.size(); }
  const std::vector<PAdicCode>& codes() const { return codes_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int gamma_max() const { return gamma_max_; }

  // Index of the vertex whose ball contains x (x needs at least N digits), or -1.
  int vertex_of(const PAdicCode& x) const;

 private:
  Graph graph_;
  std::uint32_t p_;
  unsigned level_;
  std::vector<PAdicCode> codes_;
  std::vector<int> degrees_;
  int gamma_max_ = 0;
};

// Defaults: p = 2 and the smallest N >= 1 with p^N >= n.
NetworkEmbedding embed(Graph graph, std::optional<std::uint32_t> p = {},
                       std::optional<unsigned> level = {});

struct Site {
  int vertex;            // level-N ball
  std::uint64_t offset;  // c in I + c p^N
  PAdicCode code;        // level-M centre
};

/// The level-M refinement G_N^M: n * p^{M-N} sites, vertex-major, offset-minor.
class LevelGrid {
 public:
  LevelGrid(NetworkEmbedding embedding, unsigned level_m);

  const NetworkEmbedding& embedding() const { return embedding_; }
  unsigned level() const { return level_m_; }
  std::size_t size() const { return sites_.size(); }
  std::size_t sites_per_ball() const { return per_ball_; }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(std::size_t i) const { return sites_.at(i); }
  std::size_t index(int vertex, std::uint64_t offset) const {
    return static_cast<std::size_t>(vertex) * per_ball_ + offset;
  }
  // Canonical index of the level-M site containing x, or npos when x is outside K_N.
  std::size_t locate(const PAdicCode& x) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  NetworkEmbedding embedding_;
  unsigned level_m_;
  std::size_t per_ball_;
  std::vector<Site> sites_;
};

LevelGrid refine(const NetworkEmbedding& embedding, unsigned level_m);

}  // namespace padicrd
