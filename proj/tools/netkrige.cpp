// netkrige: predict linear summaries of end-to-end path metrics from a small,
// algorithmically chosen set of measured paths.
//
// Subcommands: build, spectrum, select, fk, predict, simulate, evaluate,
// anomaly, check-bounds, pipeline. See --help on each.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netkrige/errors.hpp"
#include "netkrige/evaluation.hpp"
#include "netkrige/io.hpp"
#include "netkrige/kriging.hpp"
#include "netkrige/linalg.hpp"
#include "netkrige/selection.hpp"
#include "netkrige/spectral.hpp"
#include "netkrige/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netkrige;

namespace {

constexpr const char* kVersion = "0.1.0";

Eigen::MatrixXd diagonal_sigma(const fs::path& file) {
  const Eigen::VectorXd var = io::read_link_vector(file, "variance");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(var.size(), var.size());
  sigma.diagonal() = var;
  return sigma;
}

// Summary spec: "avg", "diff:groupA.txt,groupB.txt" or "file:l.csv".
Eigen::VectorXd parse_summary(const std::string& spec, int n_paths) {
  if (spec == "avg") return summary_average(n_paths);
  if (spec.rfind("diff:", 0) == 0) {
    const std::string rest = spec.substr(5);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw ParseError("summary diff needs two group files: diff:a.txt,b.txt");
    }
    return summary_group_difference(n_paths,
                                    io::read_group_file(rest.substr(0, comma)),
                                    io::read_group_file(rest.substr(comma + 1)));
  }
  if (spec.rfind("file:", 0) == 0) {
    return io::read_summary_vector(spec.substr(5), n_paths);
  }
  throw ParseError("unknown summary spec '" + spec + "'");
}

std::vector<SpikeEvent> parse_spikes(const std::vector<std::string>& specs) {
  std::vector<SpikeEvent> spikes;
  for (const std::string& s : specs) {
    SpikeEvent ev;
    char c1 = 0, c2 = 0;
    std::istringstream ss(s);
    if (!(ss >> ev.epoch >> c1 >> ev.link >> c2 >> ev.delta) || c1 != ':' ||
        c2 != ':' || !ss.eof()) {
      throw ParseError("bad --spike '" + s + "', expected epoch:link:delta");
    }
    spikes.push_back(ev);
  }
  return spikes;
}

// Measurement columns indexed by path id; all requested ids must be present.
Eigen::MatrixXd columns_for(const io::MeasurementTable& table,
                            const std::vector<int>& ids) {
  std::map<int, int> col_of;
  for (std::size_t c = 0; c < table.path_ids.size(); ++c) {
    col_of[table.path_ids[c]] = static_cast<int>(c);
  }
  Eigen::MatrixXd out(table.values.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = col_of.find(ids[i]);
    if (it == col_of.end()) {
      throw DimensionError("measurements lack path " + std::to_string(ids[i]));
    }
    out.col(static_cast<Eigen::Index>(i)) = table.values.col(it->second);
  }
  return out;
}

std::vector<double> parse_sweep(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0 || hi < lo) {
    throw ParseError("bad --sweep '" + spec + "', expected lo:hi:step");
  }
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_build(const fs::path& topology, const fs::path& out_matrix,
              const fs::path& out_paths) {
  const Topology topo = load_topology(topology);
  const RoutingMatrix g = build_routing_matrix(topo);
  io::write_routing_matrix(g, out_matrix);
  if (!out_paths.empty()) io::write_path_map(g, out_paths);
  std::cout << "built " << g.n_paths() << " x " << g.n_links() << " routing matrix\n";
  return 0;
}

int cmd_spectrum(const fs::path& matrix, const fs::path& out,
                 const fs::path& eigvecs_dir) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const Spectrum spec = compute_spectrum(g);
  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "k,eigenvalue,eigenvalue_ratio\n";
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    csv << (k + 1) << "," << io::format_double(spec.eigenvalues(k)) << ","
        << io::format_double(spec.eigenvalues(k) / spec.eigenvalues(0)) << "\n";
  }
  if (!eigvecs_dir.empty()) {
    fs::create_directories(eigvecs_dir);
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
      std::ofstream vec(eigvecs_dir / ("eigvec_" + std::to_string(k + 1) + ".csv"));
      vec << "link_id,magnitude\n";
      for (Eigen::Index j = 0; j < spec.eigenvectors.rows(); ++j) {
        vec << j << "," << io::format_double(std::abs(spec.eigenvectors(j, k)))
            << "\n";
      }
    }
  }
  std::cout << "numeric rank " << spec.numeric_rank << "\n";
  return 0;
}

int cmd_select(const fs::path& matrix, const fs::path& sigma_file, int k,
               const std::string& method, int c_draws, std::uint64_t seed,
               const fs::path& out) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const Eigen::MatrixXd sigma = diagonal_sigma(sigma_file);
  SelectionResult sel;
  if (method == "det") {
    sel = select_paths_deterministic(g, sigma, k);
  } else if (method == "rand") {
    sel = select_paths_randomized(g, linalg::sqrt_spd(sigma), c_draws, seed);
  } else {
    throw ParseError("--method must be det or rand");
  }
  io::write_selection(sel, out);
  std::cout << "selected " << sel.indices.size() << " paths, achieved rank "
            << sel.achieved_rank << "\n";
  return 0;
}

int cmd_fk(const fs::path& matrix, const fs::path& sigma_file, int k_max,
           const fs::path& out) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const auto curve = compute_fk_curve(g, diagonal_sigma(sigma_file), k_max);
  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "k,fk\n";
  for (const FkPoint& pt : curve) {
    csv << pt.k << "," << io::format_double(pt.fk) << "\n";
  }
  return 0;
}

int cmd_predict(const fs::path& matrix, const fs::path& sigma_file,
                const fs::path& selection_file, const std::string& summary_spec,
                const fs::path& measurements, int bias_epoch,
                const fs::path& out) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const Eigen::MatrixXd sigma = diagonal_sigma(sigma_file);
  const SelectionResult sel = io::read_selection(selection_file);
  const Eigen::VectorXd l = parse_summary(summary_spec, g.n_paths());
  const LinkModel model(Eigen::VectorXd::Zero(g.n_links()), sigma);

  Predictor pred = build_eblp(g, model, sel.indices, l);
  if (pred.condition_warning) {
    std::cerr << "warning: V_ss ill-conditioned, pseudo-inverse used\n";
  }
  const io::MeasurementTable table = io::read_measurements(measurements);
  const Eigen::MatrixXd y_sel = columns_for(table, sel.indices);

  if (bias_epoch >= 0) {
    if (bias_epoch >= table.values.rows()) {
      throw PreconditionError("--bias-correct-epoch beyond series end");
    }
    std::vector<int> all_ids(g.n_paths());
    for (int i = 0; i < g.n_paths(); ++i) all_ids[i] = i;
    const Eigen::MatrixXd full = columns_for(table, all_ids);
    pred = bias_correct(pred, g, l, full.row(bias_epoch).transpose());
  }

  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "epoch,prediction\n";
  for (Eigen::Index t = 0; t < y_sel.rows(); ++t) {
    csv << table.epochs[static_cast<std::size_t>(t)] << ","
        << io::format_double(pred.predict(y_sel.row(t).transpose())) << "\n";
  }
  return 0;
}

int cmd_simulate(const fs::path& matrix, const fs::path& mu_file,
                 const fs::path& sigma_file, int epochs, std::uint64_t seed,
                 const std::vector<std::string>& spike_specs, const fs::path& out) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const LinkModel model(io::read_link_vector(mu_file, "mu"),
                        diagonal_sigma(sigma_file));
  const EpochSeries series =
      simulate_series(g, model, epochs, seed, parse_spikes(spike_specs));
  io::write_measurements(series.values, out);
  return 0;
}

int cmd_evaluate(const fs::path& matrix, const fs::path& sigma_file,
                 const fs::path& measurements, const std::string& summary_spec,
                 int kmin, int kmax, const fs::path& out) {
  const RoutingMatrix g = io::read_routing_matrix(matrix);
  const Eigen::MatrixXd sigma = diagonal_sigma(sigma_file);
  const LinkModel model(Eigen::VectorXd::Zero(g.n_links()), sigma);
  const Eigen::VectorXd l = parse_summary(summary_spec, g.n_paths());

  const io::MeasurementTable table = io::read_measurements(measurements);
  std::vector<int> all_ids(g.n_paths());
  for (int i = 0; i < g.n_paths(); ++i) all_ids[i] = i;
  EpochSeries series;
  series.values = columns_for(table, all_ids);

  std::vector<int> ks;
  for (int k = kmin; k <= kmax; ++k) ks.push_back(k);
  const auto curve = relative_error_curve(series, g, model, l, ks);

  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "k,relative_error,excluded_epochs\n";
  for (const RelativeErrorPoint& pt : curve) {
    csv << pt.k << "," << io::format_double(pt.mean_abs_relative_error) << ","
        << pt.excluded_epochs << "\n";
  }
  return 0;
}

int cmd_anomaly(const fs::path& true_file, const fs::path& pred_file, int window,
                double truth_mult, const std::string& sweep, const fs::path& out) {
  const Eigen::VectorXd truth = io::read_series(true_file);
  const Eigen::VectorXd pred = io::read_series(pred_file);
  const RocCurve curve =
      roc_sweep(truth, pred, window, truth_mult, parse_sweep(sweep));
  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "threshold,tpr,fpr\n";
  for (const RocPoint& pt : curve.points) {
    csv << io::format_double(pt.threshold) << "," << io::format_double(pt.tpr)
        << "," << io::format_double(pt.fpr) << "\n";
  }
  return 0;
}

int cmd_check_bounds(const fs::path& matrix, const fs::path& topology,
                     const fs::path& sigma_file, const fs::path& mu_file,
                     int c_draws, int k, double delta, int trials,
                     std::uint64_t seed, const fs::path& out) {
  const Topology topo = load_topology(topology);
  const RoutingMatrix g = build_routing_matrix(topo);
  const RoutingMatrix g_file = io::read_routing_matrix(matrix);
  if (g_file.entries() != g.entries()) {
    throw PreconditionError("matrix file does not match the topology's routing");
  }
  const Eigen::MatrixXd sigma = diagonal_sigma(sigma_file);
  const Eigen::VectorXd mu = io::read_link_vector(mu_file, "mu");
  const Eigen::VectorXd l = summary_average(g.n_paths());

  std::ofstream csv(out);
  if (!csv) throw ParseError("cannot write " + out.string());
  csv << "check,k,lhs,rhs,satisfied\n";

  const Spectrum spec = compute_spectrum(g);
  const Proposition1Report p1 =
      check_proposition1(spec, betweenness_report(g, topo));
  bool all_ok = p1.all_satisfied;
  for (const Proposition1Row& row : p1.rows) {
    csv << "prop1," << row.k << "," << io::format_double(row.lambda) << ","
        << io::format_double(row.bound) << "," << (row.satisfied ? 1 : 0) << "\n";
  }

  const int rank = spec.numeric_rank;
  for (int kk = 1; kk <= rank; ++kk) {
    const Proposition2Result p2 = check_proposition2_bound(g, sigma, mu, l, kk);
    all_ok = all_ok && p2.satisfied;
    csv << "prop2," << kk << "," << io::format_double(p2.mspe_exact) << ","
        << io::format_double(p2.bound_value) << "," << (p2.satisfied ? 1 : 0)
        << "\n";
  }

  const Proposition3Result p3 =
      check_proposition3_bound(g, sigma, mu, l, c_draws, k, delta, trials, seed);
  const double limit =
      delta + 3.0 * std::sqrt(delta * (1.0 - delta) / std::max(trials, 1));
  const bool p3_ok = p3.violation_rate <= limit;
  all_ok = all_ok && p3_ok;
  csv << "prop3," << k << "," << io::format_double(p3.violation_rate) << ","
      << io::format_double(limit) << "," << (p3_ok ? 1 : 0) << "\n";

  std::cout << (all_ok ? "all bounds satisfied\n" : "BOUND VIOLATION\n");
  return all_ok ? 0 : 1;
}

// Orchestrated run: build -> spectrum -> select -> simulate -> predict ->
// evaluate, as listed in the config's "steps". Writes artifacts plus a
// manifest recording version, parameters, seed and output hashes.
int cmd_pipeline(const fs::path& config_path) {
  json cfg;
  std::ifstream in(config_path);
  if (!in) throw ParseError("cannot open config " + config_path.string());
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }

  const fs::path out_dir = cfg.value("out", "netkrige-out");
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.value("seed", 0ull);
  const std::vector<std::string> steps =
      cfg.value("steps", std::vector<std::string>{"build", "spectrum", "select",
                                                  "simulate", "predict",
                                                  "evaluate"});

  // fail fast: all referenced input files must exist before any step runs
  for (const char* key : {"topology", "sigma", "mu"}) {
    if (cfg.contains(key) && !fs::exists(cfg[key].get<std::string>())) {
      throw ParseError(std::string("config references missing file: ") +
                       cfg[key].get<std::string>());
    }
  }

  std::vector<fs::path> outputs;
  const fs::path matrix = out_dir / "G.txt";
  for (const std::string& step : steps) {
    if (step == "build") {
      cmd_build(cfg.at("topology").get<std::string>(), matrix,
                out_dir / "paths.json");
      outputs.push_back(matrix);
      outputs.push_back(out_dir / "paths.json");
    } else if (step == "spectrum") {
      cmd_spectrum(matrix, out_dir / "spectrum.csv", "");
      outputs.push_back(out_dir / "spectrum.csv");
    } else if (step == "select") {
      cmd_select(matrix, cfg.at("sigma").get<std::string>(), cfg.value("k", 1),
                 cfg.value("method", "det"), cfg.value("c", 1), seed,
                 out_dir / "selection.json");
      outputs.push_back(out_dir / "selection.json");
    } else if (step == "simulate") {
      cmd_simulate(matrix, cfg.at("mu").get<std::string>(),
                   cfg.at("sigma").get<std::string>(), cfg.value("epochs", 432),
                   seed, cfg.value("spikes", std::vector<std::string>{}),
                   out_dir / "measurements.csv");
      outputs.push_back(out_dir / "measurements.csv");
    } else if (step == "predict") {
      cmd_predict(matrix, cfg.at("sigma").get<std::string>(),
                  out_dir / "selection.json", cfg.value("summary", "avg"),
                  out_dir / "measurements.csv",
                  cfg.value("bias_correct_epoch", -1), out_dir / "predictions.csv");
      outputs.push_back(out_dir / "predictions.csv");
    } else if (step == "evaluate") {
      cmd_evaluate(matrix, cfg.at("sigma").get<std::string>(),
                   out_dir / "measurements.csv", cfg.value("summary", "avg"),
                   cfg.value("kmin", 1), cfg.value("kmax", cfg.value("k", 1)),
                   out_dir / "relerr.csv");
      outputs.push_back(out_dir / "relerr.csv");
    } else {
      throw ParseError("unknown pipeline step '" + step + "'");
    }
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = seed;
  manifest["parameters"] = cfg;
  manifest["outputs"] = json::object();
  for (const fs::path& p : outputs) {
    manifest["outputs"][p.filename().string()] = io::file_hash(p);
  }
  const auto now = std::chrono::system_clock::now();
  manifest["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  std::ofstream mf(out_dir / "manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "pipeline complete, " << outputs.size() << " artifacts in "
            << out_dir.string() << "\n";
  return 0;
}

// Effective argv: config file values become trailing flags unless the flag
// was given explicitly (command line wins).
std::vector<std::string> merge_config_args(const std::vector<std::string>& args) {
  fs::path config_file;
  std::string subcommand;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_file = args[i + 1];
    } else if (subcommand.empty() && !args[i].empty() && args[i][0] != '-') {
      subcommand = args[i];
    }
  }
  if (config_file.empty() || subcommand.empty() || subcommand == "pipeline") {
    return args;
  }
  std::ifstream in(config_file);
  if (!in) throw ParseError("cannot open config " + config_file.string());
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  std::vector<std::string> merged = args;
  if (!cfg.contains(subcommand) || !cfg[subcommand].is_object()) return merged;
  for (const auto& [key, value] : cfg[subcommand].items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_array()) {
      for (const auto& v : value) {
        merged.push_back(flag);
        merged.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      merged.push_back(flag);
      merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network kriging toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string config_file;
  app.add_option("--config", config_file,
                 "JSON config supplying default flag values (flags override)");

  // build
  auto* build = app.add_subcommand("build", "routing matrix from a topology file");
  fs::path b_topo, b_out = "G.txt", b_paths = "paths.json";
  build->add_option("--topology", b_topo, "topology JSON")->required();
  build->add_option("--out", b_out, "triplet output file");
  build->add_option("--paths", b_paths, "sidecar path map JSON");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "eigenspectrum of G^T G");
  fs::path sp_matrix, sp_out = "spectrum.csv", sp_eig;
  spectrum->add_option("--matrix", sp_matrix, "routing matrix file")->required();
  spectrum->add_option("--out", sp_out, "CSV output");
  spectrum->add_option("--eigvecs", sp_eig, "directory for per-k eigenvector CSVs");

  // select
  auto* select = app.add_subcommand("select", "choose which paths to measure");
  fs::path se_matrix, se_sigma, se_out = "selection.json";
  int se_k = 1, se_c = 1;
  std::uint64_t se_seed = 0;
  std::string se_method = "det";
  select->add_option("--matrix", se_matrix, "routing matrix file")->required();
  select->add_option("--sigma", se_sigma, "link variance CSV")->required();
  select->add_option("--k", se_k, "number of paths (deterministic)");
  select->add_option("--method", se_method, "det or rand");
  select->add_option("--c", se_c, "number of draws (randomized)");
  select->add_option("--seed", se_seed, "RNG seed (randomized)");
  select->add_option("--out", se_out, "selection JSON output");

  // fk
  auto* fk = app.add_subcommand("fk", "normalized Gram deviation curve");
  fs::path fk_matrix, fk_sigma, fk_out = "fk.csv";
  int fk_kmax = 1;
  fk->add_option("--matrix", fk_matrix, "routing matrix file")->required();
  fk->add_option("--sigma", fk_sigma, "link variance CSV")->required();
  fk->add_option("--kmax", fk_kmax, "largest k")->required();
  fk->add_option("--out", fk_out, "CSV output");

  // predict
  auto* predict = app.add_subcommand("predict", "per-epoch summary predictions");
  fs::path pr_matrix, pr_sigma, pr_sel, pr_meas, pr_out = "predictions.csv";
  std::string pr_summary = "avg";
  int pr_bias_epoch = -1;
  predict->add_option("--matrix", pr_matrix, "routing matrix file")->required();
  predict->add_option("--sigma", pr_sigma, "link variance CSV")->required();
  predict->add_option("--selection", pr_sel, "selection JSON")->required();
  predict->add_option("--summary", pr_summary, "avg | diff:a,b | file:l.csv");
  predict->add_option("--measurements", pr_meas, "measurement CSV")->required();
  predict->add_option("--bias-correct-epoch", pr_bias_epoch,
                      "epoch of the one-time full measurement (-1 disables)");
  predict->add_option("--out", pr_out, "CSV output");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "synthetic epoch series");
  fs::path si_matrix, si_mu, si_sigma, si_out = "measurements.csv";
  int si_epochs = 432;
  std::uint64_t si_seed = 0;
  std::vector<std::string> si_spikes;
  simulate->add_option("--matrix", si_matrix, "routing matrix file")->required();
  simulate->add_option("--mu", si_mu, "link mean CSV")->required();
  simulate->add_option("--sigma", si_sigma, "link variance CSV")->required();
  simulate->add_option("--epochs", si_epochs, "number of epochs");
  simulate->add_option("--seed", si_seed, "RNG seed");
  simulate->add_option("--spike", si_spikes, "epoch:link:delta (repeatable)");
  simulate->add_option("--out", si_out, "measurement CSV output");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "relative error vs k");
  fs::path ev_matrix, ev_sigma, ev_meas, ev_out = "relerr.csv";
  std::string ev_summary = "avg";
  int ev_kmin = 1, ev_kmax = 1;
  evaluate->add_option("--matrix", ev_matrix, "routing matrix file")->required();
  evaluate->add_option("--sigma", ev_sigma, "link variance CSV")->required();
  evaluate->add_option("--measurements", ev_meas, "measurement CSV")->required();
  evaluate->add_option("--summary", ev_summary, "avg | diff:a,b | file:l.csv");
  evaluate->add_option("--kmin", ev_kmin, "smallest k");
  evaluate->add_option("--kmax", ev_kmax, "largest k")->required();
  evaluate->add_option("--out", ev_out, "CSV output");

  // anomaly
  auto* anomaly = app.add_subcommand("anomaly", "spike detection ROC sweep");
  fs::path an_true, an_pred, an_out = "roc.csv";
  int an_window = 6;
  double an_truth_mult = 3.0;
  std::string an_sweep = "1:5:0.25";
  anomaly->add_option("--true", an_true, "true summary series CSV")->required();
  anomaly->add_option("--pred", an_pred, "predicted series CSV")->required();
  anomaly->add_option("--window", an_window, "trailing window (epochs)");
  anomaly->add_option("--truth-mult", an_truth_mult, "truth spike multiplier");
  anomaly->add_option("--sweep", an_sweep, "threshold sweep lo:hi:step");
  anomaly->add_option("--out", an_out, "CSV output");

  // check-bounds
  auto* bounds = app.add_subcommand("check-bounds", "propositions 1-3 checkers");
  fs::path cb_matrix, cb_topo, cb_sigma, cb_mu, cb_out = "bounds.csv";
  int cb_c = 6, cb_k = 2, cb_trials = 1000;
  double cb_delta = 0.1;
  std::uint64_t cb_seed = 0;
  bounds->add_option("--matrix", cb_matrix, "routing matrix file")->required();
  bounds->add_option("--topology", cb_topo, "topology JSON")->required();
  bounds->add_option("--sigma", cb_sigma, "link variance CSV")->required();
  bounds->add_option("--mu", cb_mu, "link mean CSV")->required();
  bounds->add_option("--c", cb_c, "randomized draw count");
  bounds->add_option("--k", cb_k, "singular dimensions for the randomized bound");
  bounds->add_option("--delta", cb_delta, "failure probability");
  bounds->add_option("--trials", cb_trials, "randomized trials");
  bounds->add_option("--seed", cb_seed, "base RNG seed");
  bounds->add_option("--out", cb_out, "CSV output");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "orchestrated run from a config");

  // global flags like --config may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    const std::vector<std::string> merged = merge_config_args(args);
    // CLI11 parses reversed vectors
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(reversed);

    if (build->parsed()) return cmd_build(b_topo, b_out, b_paths);
    if (spectrum->parsed()) return cmd_spectrum(sp_matrix, sp_out, sp_eig);
    if (select->parsed())
      return cmd_select(se_matrix, se_sigma, se_k, se_method, se_c, se_seed, se_out);
    if (fk->parsed()) return cmd_fk(fk_matrix, fk_sigma, fk_kmax, fk_out);
    if (predict->parsed())
      return cmd_predict(pr_matrix, pr_sigma, pr_sel, pr_summary, pr_meas,
                         pr_bias_epoch, pr_out);
    if (simulate->parsed())
      return cmd_simulate(si_matrix, si_mu, si_sigma, si_epochs, si_seed,
                          si_spikes, si_out);
    if (evaluate->parsed())
      return cmd_evaluate(ev_matrix, ev_sigma, ev_meas, ev_summary, ev_kmin,
                          ev_kmax, ev_out);
    if (anomaly->parsed())
      return cmd_anomaly(an_true, an_pred, an_window, an_truth_mult, an_sweep,
                         an_out);
    if (bounds->parsed())
      return cmd_check_bounds(cb_matrix, cb_topo, cb_sigma, cb_mu, cb_c, cb_k,
                              cb_delta, cb_trials, cb_seed, cb_out);
    if (pipeline->parsed()) {
      if (config_file.empty()) throw ParseError("pipeline requires --config");
      return cmd_pipeline(config_file);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ParseError::exit_code;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return DimensionError::exit_code;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return NumericError::exit_code;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return PreconditionError::exit_code;
  }
  return 0;
}
