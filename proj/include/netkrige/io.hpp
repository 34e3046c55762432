#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "netkrige/selection.hpp"
#include "netkrige/topology.hpp"

namespace netkrige::io {

/// Text triplet export: header "%netkrige G <n_p> <n_e>" followed by one
/// "<path_id> <link_id> 1" line per nonzero.
void write_routing_matrix(const RoutingMatrix& g, const std::filesystem::path& file);
RoutingMatrix read_routing_matrix(const std::filesystem::path& file);

/// Sidecar JSON mapping path ids to (origin, destination).
void write_path_map(const RoutingMatrix& g, const std::filesystem::path& file);

/// Per-link columns: "link_id,mu" and "link_id,variance".
Eigen::VectorXd read_link_vector(const std::filesystem::path& file,
                                 const std::string& value_column);
void write_link_vector(const Eigen::VectorXd& v, const std::string& value_column,
                       const std::filesystem::path& file);

/// Measurement table: header "epoch,<path_id>,...", one row per epoch.
/// Columns may cover any subset of paths; values must all parse (missing
/// entries fail fast).
struct MeasurementTable {
  std::vector<int> path_ids;   // column order
  std::vector<int> epochs;     // first column
  Eigen::MatrixXd values;      // epochs x path_ids
};

MeasurementTable read_measurements(const std::filesystem::path& file);
void write_measurements(const Eigen::MatrixXd& values,
                        const std::filesystem::path& file);

/// Two-column series: header "epoch,<name>", one value per epoch row.
Eigen::VectorXd read_series(const std::filesystem::path& file);

/// Summary weight file: "path_id,weight".
Eigen::VectorXd read_summary_vector(const std::filesystem::path& file, int n_paths);

/// Path-id group file: one id per line (comments with '#').
std::vector<int> read_group_file(const std::filesystem::path& file);

SelectionResult read_selection(const std::filesystem::path& file);
void write_selection(const SelectionResult& sel, const std::filesystem::path& file);

/// Floating point cells are printed with 12 significant digits.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a file's bytes, as hex.
std::string file_hash(const std::filesystem::path& file);

}  // namespace netkrige::io
