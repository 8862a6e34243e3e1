#include "padicrd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "padicrd/errors.hpp"

namespace padicrd::io {

std::string fmt(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

namespace {

void dump_into(const json& j, std::ostringstream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        dump_into(it.value(), os, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump_into(j[i], os, indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        dump_into(j[i], os, indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        os << fmt(x);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

json vec(const std::vector<double>& xs) { return json(xs); }

json vec(const Eigen::VectorXd& xs) { return json(std::vector<double>(xs.data(), xs.data() + xs.size())); }

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string status_name(ModeStatus s) {
  switch (s) {
    case ModeStatus::stable: return "stable";
    case ModeStatus::marginal: return "marginal";
    case ModeStatus::unstable: return "unstable";
  }
  return "unknown";
}

std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

std::string dump(const json& doc) {
  std::ostringstream os;
  dump_into(doc, os, 0);
  os << "\n";
  return os.str();
}

json embedding_json(const NetworkEmbedding& e) {
  json vertices = json::array();
  for (int k = 0; k < e.size(); ++k) {
    json v{{"vertex", k}, {"code", e.codes()[k].to_string()}, {"degree", e.degrees()[k]}};
    if (!e.graph().labels().empty()) v["label"] = e.graph().labels()[k];
    vertices.push_back(v);
  }
  return json{{"p", e.prime()},
              {"N", e.level()},
              {"n", e.size()},
              {"edges", e.graph().edge_count()},
              {"gamma_max", e.gamma_max()},
              {"components", e.graph().connected_components()},
              {"vertices", vertices}};
}

std::string embedding_table(const NetworkEmbedding& e) {
  std::ostringstream os;
  os << "p = " << e.prime() << ", N = " << e.level() << ", n = " << e.size() << "\n";
  os << pad_right("vertex", 8) << pad_right("code", 12) << "degree\n";
  for (int k = 0; k < e.size(); ++k) {
    os << pad_right(std::to_string(k), 8) << pad_right(e.codes()[k].to_string(), 12) << e.degrees()[k] << "\n";
  }
  return os.str();
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << fmt(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

json operator_json(const OperatorMatrix& op) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < op.entries.rows(); ++i) {
    rows.push_back(vec(Eigen::VectorXd(op.entries.row(i).transpose())));
  }
  return json{{"kind", to_string(op.kind)}, {"p", op.p},           {"N", op.level_n},
              {"level", op.level_m},        {"lambda", op.lambda}, {"epsilon_applied", op.epsilon_applied},
              {"notes", op.notes},          {"entries", rows}};
}

json spectrum_json(const SpectrumReport& spec) {
  json groups = json::array();
  for (const auto& g : spec.grouped()) groups.push_back(json{{"value", g.value}, {"multiplicity", g.multiplicity}});
  return json{{"source", to_string(spec.source)},
              {"eigenvalues", groups},
              {"sorted", vec(spec.eigenvalues)},
              {"residual_max", spec.residual_max},
              {"notes", spec.notes}};
}

std::string spectrum_table(const std::string& title, const SpectrumReport& spec) {
  std::ostringstream os;
  os << title << " (" << to_string(spec.source) << ")\n";
  os << "  " << pad_right("value", 14) << "multiplicity\n";
  for (const auto& g : spec.grouped()) {
    os << "  " << pad_right(fmt(std::abs(g.value) < 1e-12 ? 0.0 : g.value, 6), 14) << g.multiplicity << "\n";
  }
  for (const auto& n : spec.notes) os << "  note: " << n << "\n";
  return os.str();
}

json turing_json(const TuringReport& r) {
  const auto& j = r.jacobian;
  json spaces = json::array();
  for (const auto& s : r.spaces) {
    json modes = json::array();
    for (const auto& m : s.modes) {
      modes.push_back(json{{"kappa", m.kappa},
                           {"multiplicity", m.multiplicity},
                           {"lambda_plus", complex_json(m.lambda_plus)},
                           {"status", status_name(m.status)}});
    }
    spaces.push_back(json{{"space", s.space.name()},
                          {"pattern", s.pattern},
                          {"unstable", vec(s.unstable)},
                          {"modes", modes},
                          {"notes", s.notes}});
  }
  json doc{{"steady_state", {r.steady_state.first, r.steady_state.second}},
           {"jacobian", {{j[0][0], j[0][1]}, {j[1][0], j[1][1]}}},
           {"eps", r.eps},
           {"d", r.d},
           {"trace", r.trace},
           {"det", r.det},
           {"conditions",
            {{"T1", r.t1}, {"T2", r.t2}, {"T3", r.t3}, {"T4", r.t4}, {"T5", r.t5}}},
           {"t3_value", r.t3_value},
           {"t5_value", r.t5_value},
           {"d_c_roots", vec(r.critical.roots)},
           {"subset_monotone", r.subset_monotone},
           {"spaces", spaces}};
  doc["d_c"] = r.critical.d_c ? json(*r.critical.d_c) : json(nullptr);
  doc["kappa_min"] = r.kappa_min ? json(*r.kappa_min) : json(nullptr);
  doc["band"] = r.band ? json{{"kappa1", r.band->kappa1}, {"kappa2", r.band->kappa2}} : json(nullptr);
  return doc;
}

std::string turing_table(const TuringReport& r) {
  std::ostringstream os;
  auto flag = [](bool b) { return b ? "true" : "false"; };
  os << "steady state (u0, v0) = (" << fmt(r.steady_state.first, 6) << ", " << fmt(r.steady_state.second, 6)
     << ")\n";
  os << "J = [[" << fmt(r.jacobian[0][0], 6) << ", " << fmt(r.jacobian[0][1], 6) << "], [" << fmt(r.jacobian[1][0], 6)
     << ", " << fmt(r.jacobian[1][1], 6) << "]]\n";
  os << "TrJ = " << fmt(r.trace, 6) << ", detJ = " << fmt(r.det, 6) << ", eps = " << fmt(r.eps, 6)
     << ", d = " << fmt(r.d, 6) << "\n";
  os << "T1 " << flag(r.t1) << "  T2 " << flag(r.t2) << "  T3 " << flag(r.t3) << "  T4 " << flag(r.t4) << "  T5 "
     << flag(r.t5) << "\n";
  os << "d_c = " << (r.critical.d_c ? fmt(*r.critical.d_c, 6) : std::string("none")) << "\n";
  if (r.band) {
    os << "band (kappa1, kappa2) = (" << fmt(r.band->kappa1, 6) << ", " << fmt(r.band->kappa2, 6) << ")\n";
  } else {
    os << "band: empty\n";
  }
  for (const auto& s : r.spaces) {
    os << s.space.name() << ": " << (s.pattern ? "pattern" : "no pattern") << "\n";
    os << "  " << pad_right("kappa", 12) << pad_right("mult", 6) << pad_right("Re lambda+", 14) << "status\n";
    for (const auto& m : s.modes) {
      os << "  " << pad_right(fmt(m.kappa, 6), 12) << pad_right(std::to_string(m.multiplicity), 6)
         << pad_right(fmt(m.lambda_plus.real(), 6), 14) << status_name(m.status) << "\n";
    }
    for (const auto& n : s.notes) os << "  note: " << n << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  if (traj.states.empty()) return "t\n";
  const auto n = traj.states.front().u.size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",u" << i;
  for (Eigen::Index i = 0; i < n; ++i) os << ",v" << i;
  os << "\n";
  for (const auto& s : traj.states) {
    os << fmt(s.t);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << fmt(s.u[i]);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << fmt(s.v[i]);
    os << "\n";
  }
  return os.str();
}

json pattern_json(const PatternReport& r) {
  json modes = json::array();
  for (const auto& m : r.modes) {
    json entry{{"label", m.label}, {"kappa", m.kappa}, {"final_amplitude", m.amplitude.empty() ? 0.0 : m.amplitude.back()}};
    if (m.fit) {
      entry["fit"] = json{{"rate", m.fit->rate},       {"intercept", m.fit->intercept}, {"r2", m.fit->r2},
                          {"t_begin", m.fit->t_begin}, {"t_end", m.fit->t_end},         {"points", m.fit->points}};
    } else {
      entry["fit"] = nullptr;
    }
    modes.push_back(entry);
  }
  return json{{"verdict", to_string(r.verdict)},
              {"clusters", r.clusters},
              {"cluster_u", vec(r.cluster_u)},
              {"cluster_v", vec(r.cluster_v)},
              {"inter_ball", r.inter_ball},
              {"intra_ball", r.intra_ball},
              {"modes", modes},
              {"notes", r.notes}};
}

json convergence_json(const ConvergenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"level", r.level}, {"gap", r.gap}, {"projection_error", r.projection_error}});
  }
  return json{{"finest_level", t.finest_level}, {"non_increasing", t.non_increasing}, {"rows", rows}};
}

std::string convergence_table(const ConvergenceTable& t) {
  std::ostringstream os;
  os << pad_right("M", 6) << pad_right("gap", 14) << "projection error\n";
  for (const auto& r : t.rows) {
    os << pad_right(std::to_string(r.level), 6) << pad_right(fmt(r.gap, 6), 14) << fmt(r.projection_error, 6) << "\n";
  }
  os << "non-increasing (5% slack): " << (t.non_increasing ? "yes" : "no") << "\n";
  return os.str();
}

json replica_json(const ReplicaReport& r) {
  json trajectory = json::array();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    trajectory.push_back(json{{"t", r.times[i]}, {"distance", r.trajectory_distance[i]}});
  }
  return json{{"N", r.level_n},
              {"M", r.level_m},
              {"full_spectrum", vec(r.full_spectrum)},
              {"replica_spectrum", vec(r.replica_spectrum)},
              {"spectrum_distance", r.spectrum_distance},
              {"identification_supported", r.identification_supported},
              {"trajectory_distance", trajectory},
              {"nesting_error", r.nesting_error},
              {"replica_block_identity_error", r.replica_block_identity_error},
              {"scaled_diagonal_error", r.scaled_diagonal_error},
              {"scaled_offdiag_error", r.scaled_offdiag_error},
              {"conclusion", r.conclusion}};
}

}  // namespace padicrd::io
