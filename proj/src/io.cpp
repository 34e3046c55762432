#include "netkrige/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netkrige/errors.hpp"

namespace netkrige::io {

namespace {

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ParseError("cannot open " + file.string() + " for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": bad numeric value '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": bad integer '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_routing_matrix(const RoutingMatrix& g, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "%netkrige G " << g.n_paths() << " " << g.n_links() << "\n";
  for (int i = 0; i < g.n_paths(); ++i) {
    for (int j = 0; j < g.n_links(); ++j) {
      if (g.entries()(i, j) != 0.0) out << i << " " << j << " 1\n";
    }
  }
}

RoutingMatrix read_routing_matrix(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string tag, kind;
  int n_p = 0, n_e = 0;
  in >> tag >> kind >> n_p >> n_e;
  if (tag != "%netkrige" || kind != "G" || n_p <= 0 || n_e <= 0) {
    throw ParseError(file.string() + ": expected '%netkrige G <n_p> <n_e>' header");
  }
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n_p, n_e);
  int r, c, v;
  while (in >> r >> c >> v) {
    if (r < 0 || r >= n_p || c < 0 || c >= n_e || v != 1) {
      throw ParseError(file.string() + ": bad triplet line");
    }
    entries(r, c) = 1.0;
  }
  // endpoints are carried by the sidecar; placeholders keep row ids usable
  std::vector<PathEndpoints> paths(n_p);
  return RoutingMatrix(std::move(entries), std::move(paths));
}

void write_path_map(const RoutingMatrix& g, const std::filesystem::path& file) {
  nlohmann::json doc;
  doc["paths"] = nlohmann::json::array();
  for (const PathEndpoints& p : g.paths()) {
    doc["paths"].push_back({p.origin, p.destination});
  }
  open_out(file) << doc.dump(2) << "\n";
}

Eigen::VectorXd read_link_vector(const std::filesystem::path& file,
                                 const std::string& value_column) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "link_id" || header[1] != value_column) {
    throw ParseError(file.string() + ": expected header 'link_id," + value_column + "'");
  }
  std::vector<std::pair<int, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError(file.string() + ": expected two columns");
    rows.push_back({parse_int(cells[0], file.string()),
                    parse_double(cells[1], file.string())});
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [id, value] : rows) {
    if (id < 0 || id >= static_cast<int>(rows.size()) || seen[id]) {
      throw ParseError(file.string() + ": link ids must be dense and unique");
    }
    seen[id] = true;
    v(id) = value;
  }
  return v;
}

void write_link_vector(const Eigen::VectorXd& v, const std::string& value_column,
                       const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "link_id," << value_column << "\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << i << "," << format_double(v(i)) << "\n";
  }
}

MeasurementTable read_measurements(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "epoch") {
    throw ParseError(file.string() + ": expected header 'epoch,<path_id>,...'");
  }
  MeasurementTable table;
  for (std::size_t i = 1; i < header.size(); ++i) {
    table.path_ids.push_back(parse_int(header[i], file.string()));
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError(file.string() + ": row has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(header.size()));
    }
    table.epochs.push_back(parse_int(cells[0], file.string()));
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      row.push_back(parse_double(cells[i], file.string()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(file.string() + ": no measurement rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.path_ids.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < rows[t].size(); ++i) {
      table.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          rows[t][i];
    }
  }
  return table;
}

void write_measurements(const Eigen::MatrixXd& values,
                        const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "epoch";
  for (Eigen::Index i = 0; i < values.cols(); ++i) out << "," << i;
  out << "\n";
  for (Eigen::Index t = 0; t < values.rows(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < values.cols(); ++i) {
      out << "," << format_double(values(t, i));
    }
    out << "\n";
  }
}

Eigen::VectorXd read_series(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "epoch") {
    throw ParseError(file.string() + ": expected header 'epoch,<name>'");
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError(file.string() + ": expected two columns");
    values.push_back(parse_double(cells[1], file.string()));
  }
  if (values.empty()) throw ParseError(file.string() + ": no rows");
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd read_summary_vector(const std::filesystem::path& file, int n_paths) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "path_id" || header[1] != "weight") {
    throw ParseError(file.string() + ": expected header 'path_id,weight'");
  }
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n_paths);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError(file.string() + ": expected two columns");
    const int id = parse_int(cells[0], file.string());
    if (id < 0 || id >= n_paths) {
      throw ParseError(file.string() + ": path id out of range");
    }
    l(id) = parse_double(cells[1], file.string());
  }
  return l;
}

std::vector<int> read_group_file(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::vector<int> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    int id;
    while (ss >> id) ids.push_back(id);
  }
  if (ids.empty()) throw ParseError(file.string() + ": no path ids");
  return ids;
}

SelectionResult read_selection(const std::filesystem::path& file) {
  nlohmann::json doc;
  try {
    open_in(file) >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  SelectionResult sel;
  try {
    sel.indices = doc.at("indices").get<std::vector<int>>();
    sel.scaling = doc.at("scaling").get<std::vector<double>>();
    sel.achieved_rank = doc.at("achieved_rank").get<int>();
    const std::string method = doc.at("method").get<std::string>();
    sel.method = method == "randomized" ? SelectionMethod::randomized
                                        : SelectionMethod::deterministic;
    if (doc.contains("seed") && !doc["seed"].is_null()) {
      sel.seed = doc["seed"].get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return sel;
}

void write_selection(const SelectionResult& sel, const std::filesystem::path& file) {
  nlohmann::json doc;
  doc["indices"] = sel.indices;
  doc["scaling"] = sel.scaling;
  doc["achieved_rank"] = sel.achieved_rank;
  doc["method"] =
      sel.method == SelectionMethod::randomized ? "randomized" : "deterministic";
  if (sel.seed) {
    doc["seed"] = *sel.seed;
  } else {
    doc["seed"] = nullptr;
  }
  open_out(file) << doc.dump(2) << "\n";
}

std::string file_hash(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("cannot hash " + file.string());
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace netkrige::io
