// Copyright 2026 The sll Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sll/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "sll/dataset.h"
#include "sll/evaluation.h"
#include "sll/graph.h"
#include "sll/inference.h"
#include "sll/labelspace.h"
#include "sll/solver.h"
#include "sll/text_io.h"

namespace sll::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kCommands = {"fit",   "predict", "cv",
                                            "sweep", "synth",   "friedman"};

struct RunConfig {
  std::string command;
  std::string features;
  std::string candidates;
  std::string truth;
  std::string manifest;
  std::string out;
  std::string model;
  std::string grid;
  std::string table;
  std::string theta = "auto";
  std::uint64_t seed = 42;
  bool deterministic = false;
  bool normalize = false;
  bool dump_graph = false;
  double confidence = 0.90;
  int predict_k = 0;  // 0: use the model's K
  std::string predict_theta;
  SolverConfig solver;
  SyntheticSpec synth;
};

std::optional<double> ParseTheta(const std::string& value) {
  if (value == "auto") return std::nullopt;
  return text::ParseDouble(value, "--theta");
}

void AddDatasetOptions(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--features", cfg.features, "Tab-separated feature file");
  sub->add_option("--candidates", cfg.candidates,
                  "Comma-separated candidate label file");
  sub->add_option("--truth", cfg.truth, "Ground-truth label file");
  sub->add_option("--manifest", cfg.manifest,
                  "key=value manifest naming the dataset files");
  sub->add_flag("--normalize", cfg.normalize,
                "Scale feature rows to unit length");
}

void AddSolverOptions(CLI::App* sub, RunConfig& cfg) {
  auto& s = cfg.solver;
  sub->add_option("--alpha", s.alpha, "Fidelity weight")->capture_default_str();
  sub->add_option("--beta", s.beta, "Discrimination weight")
      ->capture_default_str();
  sub->add_option("--K", s.k, "Neighbors in the graph and at test time")
      ->capture_default_str();
  sub->add_option("--theta", cfg.theta, "Kernel width or 'auto'")
      ->capture_default_str();
  sub->add_option("--rho", s.rho)->capture_default_str();
  sub->add_option("--sigma0", s.sigma0)->capture_default_str();
  sub->add_option("--sigma-cap", s.sigma_cap)->capture_default_str();
  sub->add_option("--t-max", s.t_max)->capture_default_str();
  sub->add_option("--eps0", s.eps0)->capture_default_str();
  sub->add_option("--loop-max", s.loop_max)->capture_default_str();
  sub->add_option("--eps1", s.eps1)->capture_default_str();
  sub->add_option("--gd-max-iters", s.gd_max_iters)->capture_default_str();
  sub->add_option("--gd-grad-tol", s.gd_grad_tol);
  sub->add_option("--tau0", s.tau0);
  sub->add_option("--armijo-c", s.armijo_c)->capture_default_str();
  sub->add_option("--backtrack-factor", s.backtrack_factor)
      ->capture_default_str();
  sub->add_option("--precondition", s.precondition)->capture_default_str();
  sub->add_option("--init-jitter", s.init_jitter)->capture_default_str();
}

void AddRunOptions(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Seed for splits")->capture_default_str();
  sub->add_flag("--deterministic", cfg.deterministic,
                "Run folds and grid points serially");
}

Dataset LoadInput(const RunConfig& cfg) {
  Dataset ds;
  if (!cfg.manifest.empty()) {
    ds = LoadManifest(cfg.manifest);
  } else {
    if (cfg.features.empty() || cfg.candidates.empty()) {
      throw Error(ErrorKind::kUsage,
                  "need --features and --candidates, or --manifest");
    }
    std::optional<fs::path> truth;
    if (!cfg.truth.empty()) truth = cfg.truth;
    ds = LoadDataset(cfg.features, cfg.candidates, truth);
  }
  return cfg.normalize ? NormalizeUnitLength(ds) : ds;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

fs::path RequireOutDir(const RunConfig& cfg) {
  if (cfg.out.empty()) throw Error(ErrorKind::kUsage, "--out is required");
  fs::create_directories(cfg.out);
  return cfg.out;
}

// Writes the settings in effect as a config file that the same subcommand
// accepts back via --config. Derived defaults are written as comments.
void EchoConfig(const RunConfig& cfg, const fs::path& path) {
  auto out = OpenOutput(path);
  const auto put = [&](const std::string& key, const std::string& value) {
    if (!value.empty()) out << key << '=' << value << '\n';
  };
  const auto num = [](double v) { return text::FormatDouble(v); };
  out << "command=" << cfg.command << '\n';
  if (cfg.command == "synth") {
    put("n", std::to_string(cfg.synth.n));
    put("c", std::to_string(cfg.synth.c));
    put("d", std::to_string(cfg.synth.d));
    put("sep", num(cfg.synth.sep));
    put("p", num(cfg.synth.p_coocc));
    put("r", std::to_string(cfg.synth.r_extra));
    put("seed", std::to_string(cfg.synth.seed));
    return;
  }
  put("features", cfg.features);
  put("candidates", cfg.candidates);
  put("truth", cfg.truth);
  put("manifest", cfg.manifest);
  put("normalize", cfg.normalize ? "true" : "false");
  if (cfg.command != "fit") {
    put("seed", std::to_string(cfg.seed));
    put("deterministic", cfg.deterministic ? "true" : "false");
  }
  if (cfg.command == "fit") put("dump-graph", cfg.dump_graph ? "true" : "false");
  put("grid", cfg.grid);
  const auto& s = cfg.solver;
  put("alpha", num(s.alpha));
  put("beta", num(s.beta));
  put("K", std::to_string(s.k));
  put("theta", cfg.theta);
  put("rho", num(s.rho));
  put("sigma0", num(s.sigma0));
  put("sigma-cap", num(s.sigma_cap));
  put("t-max", std::to_string(s.t_max));
  put("eps0", num(s.eps0));
  put("loop-max", std::to_string(s.loop_max));
  put("eps1", num(s.eps1));
  put("gd-max-iters", std::to_string(s.gd_max_iters));
  if (s.gd_grad_tol) {
    put("gd-grad-tol", num(*s.gd_grad_tol));
  } else {
    out << "# gd-grad-tol: 1e-6 * sqrt(n c)\n";
  }
  if (s.tau0) {
    put("tau0", num(*s.tau0));
  } else {
    out << "# tau0: derived from the curvature bound\n";
  }
  put("armijo-c", num(s.armijo_c));
  put("backtrack-factor", num(s.backtrack_factor));
  put("precondition", s.precondition ? "true" : "false");
  put("init-jitter", num(s.init_jitter));
}

void WriteMatrixTsv(const Matrix& m, const fs::path& path) {
  auto out = OpenOutput(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << '\t';
      out << text::FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

int RunFit(RunConfig& cfg, std::ostream& out) {
  const Dataset ds = LoadInput(cfg);
  const auto dir = RequireOutDir(cfg);
  cfg.solver.theta = ParseTheta(cfg.theta);
  cfg.solver.Validate();

  const KnnGraph graph = BuildKnnGraph(ds, cfg.solver.k, cfg.solver.theta);
  const SolverReport report = AlmFit(graph, Encode(ds), cfg.solver);

  {
    auto labels = OpenOutput(dir / "labels.csv");
    labels << "index,label\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
      labels << i + 1 << ',' << report.labels[i] << '\n';
    }
  }
  WriteMatrixTsv(report.f_star, dir / "f_star.tsv");
  {
    auto trace = OpenOutput(dir / "trace.csv");
    WriteTraceCsv(report, trace);
  }
  if (cfg.dump_graph) {
    auto edges = OpenOutput(dir / "graph_edges.tsv");
    WriteEdgeList(graph, edges);
  }
  SavePredictor({ds.features, report.onehot, cfg.solver.k, graph.theta}, dir);
  {
    std::ofstream model(dir / "model.txt", std::ios::app);
    model << "normalize=" << cfg.normalize << '\n';
  }
  EchoConfig(cfg, dir / "effective_config.txt");

  out << "loops=" << report.loops_used << " converged=" << report.converged
      << " theta=" << text::FormatDouble(graph.theta)
      << " rowsum_resid=" << text::FormatDouble(report.rowsum_resid)
      << " min_entry=" << text::FormatDouble(report.min_entry);
  if (ds.truth) {
    out << " train_acc=" << text::FormatDouble(TrainingAccuracy(report, *ds.truth));
  }
  out << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return kExitOk;
}

int RunPredict(RunConfig& cfg, std::ostream& out) {
  if (cfg.model.empty() || cfg.features.empty() || cfg.out.empty()) {
    throw Error(ErrorKind::kUsage, "predict needs --model, --features and --out");
  }
  Predictor predictor = LoadPredictor(cfg.model);
  bool normalize = false;
  for (const auto& [key, value] :
       text::ReadKeyValueFile(fs::path(cfg.model) / "model.txt")) {
    if (key == "normalize") normalize = value == "1" || value == "true";
  }
  if (cfg.predict_k > 0) predictor.k = cfg.predict_k;
  if (!cfg.predict_theta.empty()) {
    predictor.theta = text::ParseDouble(cfg.predict_theta, "--theta");
  }
  predictor.Validate();

  Matrix x = LoadFeatures(cfg.features);
  if (normalize) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double norm = x.row(i).norm();
      if (!(norm > 0.0)) {
        throw Error(ErrorKind::kValidation,
                    "row " + std::to_string(i + 1) + ": zero-norm feature row");
      }
      x.row(i) /= norm;
    }
  }
  const auto predictions = PredictBatch(predictor, x);
  {
    auto file = OpenOutput(cfg.out);
    WritePredictionsCsv(predictions, static_cast<int>(predictor.onehot.cols()),
                        file);
  }
  if (std::any_of(predictions.begin(), predictions.end(),
                  [](const Prediction& p) { return p.k_clamped; })) {
    out << "warning: K exceeds the training set size; clamped to "
        << predictor.train_features.rows() << '\n';
  }
  if (!cfg.truth.empty()) {
    std::vector<int> truth;
    for (const auto& line : text::ReadLines(cfg.truth)) {
      truth.push_back(static_cast<int>(text::ParseInt(line, cfg.truth)));
    }
    std::vector<int> predicted;
    for (const auto& p : predictions) predicted.push_back(p.label);
    out << "test_acc=" << text::FormatDouble(Accuracy(predicted, truth)) << '\n';
  }
  out << "predicted=" << predictions.size() << '\n';
  return kExitOk;
}

int RunCv(RunConfig& cfg, std::ostream& out) {
  const Dataset ds = LoadInput(cfg);
  const auto dir = RequireOutDir(cfg);
  cfg.solver.theta = ParseTheta(cfg.theta);
  const CvResult result =
      CrossValidate(ds, cfg.solver, cfg.seed, !cfg.deterministic);
  {
    auto file = OpenOutput(dir / "results.csv");
    WriteFoldsCsv(result, file);
  }
  {
    auto file = OpenOutput(dir / "summary.csv");
    file << "metric,mean,std\n";
    auto row = [&](const char* name, const MeanStd& m) {
      file << name << ',' << text::FormatDouble(m.mean) << ','
           << text::FormatDouble(m.std) << '\n';
    };
    row("train_acc", result.train);
    row("test_acc", result.test);
    row("baseline_test_acc", result.baseline_test);
  }
  EchoConfig(cfg, dir / "effective_config.txt");
  out << "train_acc=" << text::FormatDouble(result.train.mean) << "+-"
      << text::FormatDouble(result.train.std)
      << " test_acc=" << text::FormatDouble(result.test.mean) << "+-"
      << text::FormatDouble(result.test.std)
      << " baseline_test_acc=" << text::FormatDouble(result.baseline_test.mean)
      << '\n';
  return kExitOk;
}

int RunSweep(RunConfig& cfg, std::ostream& out) {
  if (cfg.grid.empty()) throw Error(ErrorKind::kUsage, "sweep needs --grid");
  const Dataset ds = LoadInput(cfg);
  const auto dir = RequireOutDir(cfg);
  cfg.solver.theta = ParseTheta(cfg.theta);
  cfg.solver.Validate();
  const SweepGrid grid = LoadSweepGrid(cfg.grid, cfg.solver);
  const auto rows = Sweep(ds, grid, cfg.solver, cfg.seed, !cfg.deterministic);
  {
    auto file = OpenOutput(dir / "sweep.csv");
    WriteSweepCsv(rows, file);
  }
  EchoConfig(cfg, dir / "effective_config.txt");
  out << "grid_points=" << rows.size() << '\n';
  return kExitOk;
}

int RunSynth(RunConfig& cfg, std::ostream& out) {
  const auto dir = RequireOutDir(cfg);
  const Dataset ds = MakeSynthetic(cfg.synth);
  SaveDataset(ds, dir);
  EchoConfig(cfg, dir / "effective_config.txt");
  out << "n=" << ds.size() << " d=" << ds.dims() << " c=" << ds.num_classes
      << " mean_labels=" << text::FormatDouble(ds.MeanCandidateCount()) << '\n';
  return kExitOk;
}

void WriteFriedman(const AccuracyTable& table, const FriedmanResult& result,
                   std::ostream& out) {
  out << "statistic=" << text::FormatDouble(result.statistic) << '\n'
      << "df=" << result.df << '\n'
      << "critical=" << text::FormatDouble(result.critical) << '\n'
      << "reject=" << result.reject << '\n'
      << "method,mean_rank,pairwise_statistic,reject_vs_reference\n";
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    out << table.methods[m] << ','
        << text::FormatDouble(result.mean_ranks(static_cast<Eigen::Index>(m)))
        << ',' << text::FormatDouble(result.pairwise_statistic[m]) << ','
        << result.reject_per_method[m] << '\n';
  }
}

int RunFriedman(RunConfig& cfg, std::ostream& out) {
  if (cfg.table.empty()) throw Error(ErrorKind::kUsage, "friedman needs --table");
  const AccuracyTable table = LoadAccuracyTable(cfg.table);
  const FriedmanResult result = FriedmanTest(table.values, cfg.confidence);
  WriteFriedman(table, result, out);
  if (!cfg.out.empty()) {
    auto file = OpenOutput(cfg.out);
    WriteFriedman(table, result, file);
  }
  return kExitOk;
}

// Splices `--key=value` arguments from a --config file right after the
// subcommand so that explicit flags, which come later, take precedence.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw Error(ErrorKind::kUsage, "--config needs a file name");
      }
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return rest;

  std::vector<std::string> injected;
  for (const auto& [key, value] : text::ReadKeyValueFile(*config_path)) {
    if (key == "command") continue;
    injected.push_back("--" + key + "=" + value);
  }
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (sub == rest.end()) {
    throw Error(ErrorKind::kUsage, "no subcommand given");
  }
  rest.insert(sub + 1, injected.begin(), injected.end());
  return rest;
}

int ExitCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kFormat:
    case ErrorKind::kValidation:
      return kExitData;
    case ErrorKind::kSolver:
      return kExitSolver;
  }
  return kExitSolver;
}

void ReportError(std::ostream& err, const char* kind, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  err << "error: kind=" << kind << " message=" << message << '\n';
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Superset-label disambiguation and nearest-neighbor "
               "classification"};
  app.name("sll");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  // Handled by ExpandConfig; declared so it shows up in --help.
  app.add_option("--config", "key=value file with defaults for any flag");

  auto* fit = app.add_subcommand("fit", "Disambiguate a training set");
  AddDatasetOptions(fit, cfg);
  AddSolverOptions(fit, cfg);
  fit->add_option("--out", cfg.out, "Output model directory");
  fit->add_flag("--dump-graph", cfg.dump_graph, "Write graph_edges.tsv");

  auto* predict = app.add_subcommand("predict", "Classify new examples");
  predict->add_option("--model", cfg.model, "Directory written by fit");
  predict->add_option("--features", cfg.features, "Features to classify");
  predict->add_option("--truth", cfg.truth, "Optional labels for accuracy");
  predict->add_option("--out", cfg.out, "Prediction CSV");
  predict->add_option("--K", cfg.predict_k, "Override the model's K");
  predict->add_option("--theta", cfg.predict_theta,
                      "Override the model's kernel width");

  auto* cv = app.add_subcommand("cv", "Five-fold cross validation");
  AddDatasetOptions(cv, cfg);
  AddSolverOptions(cv, cfg);
  AddRunOptions(cv, cfg);
  cv->add_option("--out", cfg.out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Cross validation over a grid");
  AddDatasetOptions(sweep, cfg);
  AddSolverOptions(sweep, cfg);
  AddRunOptions(sweep, cfg);
  sweep->add_option("--grid", cfg.grid, "Grid file (alpha=, beta=, K= lists)");
  sweep->add_option("--out", cfg.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--n", cfg.synth.n)->capture_default_str();
  synth->add_option("--c", cfg.synth.c)->capture_default_str();
  synth->add_option("--d", cfg.synth.d)->capture_default_str();
  synth->add_option("--sep", cfg.synth.sep)->capture_default_str();
  synth->add_option("--p", cfg.synth.p_coocc, "Corruption probability")
      ->capture_default_str();
  synth->add_option("--r", cfg.synth.r_extra, "False labels per corruption")
      ->capture_default_str();
  synth->add_option("--seed", cfg.synth.seed)->capture_default_str();
  synth->add_option("--out", cfg.out, "Output directory");

  auto* friedman = app.add_subcommand("friedman", "Friedman rank test");
  friedman->add_option("--table", cfg.table, "Methods x datasets accuracies");
  friedman->add_option("--confidence", cfg.confidence)->capture_default_str();
  friedman->add_option("--out", cfg.out, "Optional copy of the report");

  try {
    auto expanded = ExpandConfig(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ReportError(err, "usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    ReportError(err, ToString(e.kind()), e.what());
    return ExitCode(e.kind());
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "fit") return RunFit(cfg, out);
    if (cfg.command == "predict") return RunPredict(cfg, out);
    if (cfg.command == "cv") return RunCv(cfg, out);
    if (cfg.command == "sweep") return RunSweep(cfg, out);
    if (cfg.command == "synth") return RunSynth(cfg, out);
    return RunFriedman(cfg, out);
  } catch (const Error& e) {
    ReportError(err, ToString(e.kind()), e.what());
    return ExitCode(e.kind());
  } catch (const fs::filesystem_error& e) {
    ReportError(err, "io", e.what());
    return kExitIo;
  }
}

}  // namespace sll::cli
