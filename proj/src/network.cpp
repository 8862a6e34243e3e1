#include "padicrd/network.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "padicrd/errors.hpp"

namespace padicrd {

Graph::Graph(Eigen::MatrixXi adjacency, std::vector<std::string> labels)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw ConfigError("adjacency matrix is " + std::to_string(adjacency_.rows()) + "x" +
                      std::to_string(adjacency_.cols()) + ", expected square");
  }
  if (adjacency_.rows() == 0) throw ConfigError("graph has no vertices");
  for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
    for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
      const int a = adjacency_(i, j);
      if (a != 0 && a != 1) {
        throw ConfigError("adjacency entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") = " + std::to_string(a) + " is not 0/1");
      }
    }
  }
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != adjacency_.rows()) {
    throw ConfigError("label count does not match vertex count");
  }
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                        std::vector<std::string> labels) {
  if (n <= 0) throw ConfigError("graph needs at least one vertex");
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ConfigError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                        ") out of range for n=" + std::to_string(n));
    }
    a(i, j) = 1;
    a(j, i) = 1;
  }
  return Graph(std::move(a), std::move(labels));
}

Graph Graph::complete(int n) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Ones(n, n);
  a.diagonal().setZero();
  return Graph(std::move(a));
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_edges(n, e);
}

Graph Graph::cycle(int n) {
  if (n < 3) throw ArgumentError("a cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return from_edges(n, e);
}

bool Graph::is_symmetric() const { return adjacency_ == adjacency_.transpose(); }

bool Graph::has_zero_diagonal() const { return adjacency_.diagonal().isZero(); }

std::vector<int> Graph::degrees() const {
  std::vector<int> d(size());
  for (int i = 0; i < size(); ++i) d[i] = adjacency_.row(i).sum();
  return d;
}

int Graph::edge_count() const {
  const int off = adjacency_.sum() - adjacency_.diagonal().sum();
  return off / 2 + adjacency_.diagonal().sum();
}

int Graph::connected_components() const {
  std::vector<int> parent(size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (adjacency_(i, j) || adjacency_(j, i)) parent[find(i)] = find(j);
    }
  }
  int count = 0;
  for (int i = 0; i < size(); ++i) count += (find(i) == i);
  return count;
}

namespace {

void check_self_loops(const Graph& g, GraphLoadOptions opts) {
  if (opts.strict && !g.has_zero_diagonal()) {
    for (int i = 0; i < g.size(); ++i) {
      if (g.adjacency()(i, i)) throw ConfigError("self-loop at vertex " + std::to_string(i));
    }
  }
}

}  // namespace

GraphDocument parse_edge_list(const std::string& text, GraphLoadOptions opts) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long i = 0, j = 0;
    if (!(ls >> i)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ConfigError("edge list line " + std::to_string(lineno) + ": expected \"i j\"");
    }
    std::string rest;
    if (!(ls >> j) || (ls >> rest)) {
      throw ConfigError("edge list line " + std::to_string(lineno) + ": expected exactly two indices");
    }
    if (i < 0 || j < 0 || i > 1'000'000 || j > 1'000'000) {
      throw ConfigError("edge list line " + std::to_string(lineno) + ": index out of range");
    }
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    max_index = std::max<int>(max_index, static_cast<int>(std::max(i, j)));
  }
  if (edges.empty()) throw ConfigError("edge list contains no edges");
  GraphDocument doc{Graph::from_edges(max_index + 1, edges), {}, {}};
  check_self_loops(doc.graph, opts);
  return doc;
}

GraphDocument parse_graph_json(const std::string& text, GraphLoadOptions opts) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("graph document: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("graph document must be an object");
  static const std::vector<std::string> known{"n", "edges", "adjacency", "labels", "p", "N", "directed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("graph document: unknown key \"" + key + "\"");
    }
  }
  try {
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

    std::optional<Graph> graph;
    if (j.contains("adjacency")) {
      const auto rows = j.at("adjacency").get<std::vector<std::vector<int>>>();
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXi a(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != n) {
          throw ConfigError("adjacency row " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " entries, expected " + std::to_string(n));
        }
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = rows[r][c];
      }
      if (j.contains("n") && j.at("n").get<Eigen::Index>() != n) {
        throw ConfigError("field n disagrees with adjacency size");
      }
      graph.emplace(std::move(a), std::move(labels));
    } else {
      if (!j.contains("n")) throw ConfigError("graph document needs n together with edges");
      const int n = j.at("n").get<int>();
      const auto edges = j.value("edges", std::vector<std::pair<int, int>>{});
      if (j.value("directed", false)) {
        if (n <= 0) throw ConfigError("graph needs at least one vertex");
        Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
        for (auto [s, t] : edges) {
          if (s < 0 || t < 0 || s >= n || t >= n) throw ConfigError("edge index out of range");
          a(s, t) = 1;
        }
        graph.emplace(std::move(a), std::move(labels));
      } else {
        graph.emplace(Graph::from_edges(n, edges, std::move(labels)));
      }
    }
    GraphDocument doc{std::move(*graph), {}, {}};
    if (j.contains("p")) doc.p = j.at("p").get<std::uint32_t>();
    if (j.contains("N")) doc.level = j.at("N").get<unsigned>();
    check_self_loops(doc.graph, opts);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph document: ") + e.what());
  }
}

GraphDocument load_graph(const std::filesystem::path& path, GraphLoadOptions opts) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_graph_json(text, opts);
  return parse_edge_list(text, opts);
}

NetworkEmbedding::NetworkEmbedding(Graph graph, std::uint32_t p, unsigned level)
    : graph_(std::move(graph)), p_(p), level_(level) {
  if (!is_prime(p)) throw ArgumentError(std::to_string(p) + " is not prime");
  if (level < 1) throw ArgumentError("embedding level N must be >= 1");
  const auto capacity = checked_pow(p, level);
  if (capacity < static_cast<std::uint64_t>(graph_.size())) {
    throw ArgumentError("p^N = " + std::to_string(capacity) + " < n = " + std::to_string(graph_.size()));
  }
  for (int k = 0; k < graph_.size(); ++k) codes_.push_back(PAdicCode::from_integer(p, k, level));
  degrees_ = graph_.degrees();
  gamma_max_ = *std::max_element(degrees_.begin(), degrees_.end());
}

int NetworkEmbedding::vertex_of(const PAdicCode& x) const {
  if (x.precision() < level_) throw PrecisionError("code shorter than the embedding level");
  const auto v = x.truncated(level_).value();
  return v < static_cast<std::uint64_t>(size()) ? static_cast<int>(v) : -1;
}

NetworkEmbedding embed(Graph graph, std::optional<std::uint32_t> p, std::optional<unsigned> level) {
  const std::uint32_t prime = p.value_or(2);
  if (!is_prime(prime)) throw ArgumentError(std::to_string(prime) + " is not prime");
  unsigned n_level = 1;
  if (level) {
    n_level = *level;
  } else {
    while (checked_pow(prime, n_level) < static_cast<std::uint64_t>(graph.size())) ++n_level;
  }
  return NetworkEmbedding(std::move(graph), prime, n_level);
}

LevelGrid::LevelGrid(NetworkEmbedding embedding, unsigned level_m)
    : embedding_(std::move(embedding)), level_m_(level_m) {
  const auto n_level = embedding_.level();
  if (level_m < n_level) throw ArgumentError("grid level M must be >= N");
  per_ball_ = checked_pow(embedding_.prime(), level_m - n_level);
  sites_.reserve(per_ball_ * embedding_.size());
  for (int v = 0; v < embedding_.size(); ++v) {
    auto codes = refine_ball(embedding_.codes()[v], n_level, level_m);
    for (std::uint64_t c = 0; c < codes.size(); ++c) sites_.push_back({v, c, std::move(codes[c])});
  }
}

std::size_t LevelGrid::locate(const PAdicCode& x) const {
  if (x.precision() < level_m_) throw PrecisionError("code shorter than the grid level");
  const int v = embedding_.vertex_of(x);
  if (v < 0) return npos;
  const auto p = embedding_.prime();
  std::uint64_t offset = 0;
  for (unsigned i = level_m_; i-- > embedding_.level();) offset = offset * p + x.digit(i);
  return index(v, offset);
}

LevelGrid refine(const NetworkEmbedding& embedding, unsigned level_m) {
  return LevelGrid(embedding, level_m);
}

}  // namespace padicrd
