#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "padicrd/network.hpp"
#include "padicrd/operators.hpp"
#include "padicrd/simulate.hpp"
#include "padicrd/spectral.hpp"
#include "padicrd/turing.hpp"

namespace padicrd::io {

using nlohmann::json;

// printf("%.*g") formatting; 17 digits for machine files, 6 for tables.
std::string fmt(double x, int digits = 17);

// Writes text to path, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

// JSON with numbers printed at 17 significant digits.
std::string dump(const json& doc);

json embedding_json(const NetworkEmbedding& embedding);
std::string embedding_table(const NetworkEmbedding& embedding);

std::string matrix_csv(const Eigen::MatrixXd& m);
json operator_json(const OperatorMatrix& op);

json spectrum_json(const SpectrumReport& spec);
std::string spectrum_table(const std::string& title, const SpectrumReport& spec);

json turing_json(const TuringReport& rep);
std::string turing_table(const TuringReport& rep);

// Columns: t, u per site, v per site in canonical site order.
std::string trajectory_csv(const Trajectory& traj);

json pattern_json(const PatternReport& rep);
json convergence_json(const ConvergenceTable& table);
std::string convergence_table(const ConvergenceTable& table);
json replica_json(const ReplicaReport& rep);

}  // namespace padicrd::io
