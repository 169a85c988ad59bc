// hyperspec-bench: band selection, classifier sweeps and map rendering for
// hyperspectral cubes stored as raw float32 BSQ with a JSON sidecar.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hyperspec/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hyperspec;

namespace {

struct Overrides {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

ExperimentConfig build_config(const std::string& config_path, const Overrides& overrides) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    for (const auto& [k, v] : read_key_values(config_path)) apply_setting(config, k, v);
  }
  for (const auto& [k, v] : overrides.values) apply_setting(config, k, v);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutual-information band selection and supervised classifier benchmark for hyperspectral images"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_over;
  auto* run = app.add_subcommand("run", "Band-count sweep over the classifier roster");
  run->add_option("--config", config_path, "key=value config file");
  run_over.add(run, "--cube", "cube", "cube payload (.hsib, sidecar .hsib.json)");
  run_over.add(run, "--gt", "gt", "ground truth payload (.gt, sidecar .gt.json)");
  run_over.add(run, "--bands", "bands", "comma-separated band counts");
  run_over.add(run, "--classifiers", "classifiers", "all-paper or comma-separated ids");
  run_over.add(run, "--seed", "seed", "global seed");
  run_over.add(run, "--out", "out", "output directory");
  run_over.add(run, "--levels", "levels", "histogram levels for MI");
  run_over.add(run, "--threshold", "threshold", "minimum MI gain for acceptance");
  run_over.add(run, "--gest-rule", "gest_rule", "mean or pairwise");
  run_over.add(run, "--train-fraction", "train_fraction", "per-class training fraction");
  run_over.add(run, "--cv-folds", "cv_folds", "cross-validation folds");
  run_over.add(run, "--standardize", "standardize", "z-score features for SVM/KNN/LDA (true/false)");
  run_over.add(run, "--timing", "timing", "record wall-clock times (true/false)");
  run_over.add(run, "--maps", "maps", "write maps and models (true/false)");

  std::string select_config;
  Overrides select_over;
  auto* select = app.add_subcommand("select", "Run band selection only and write the trace");
  select->add_option("--config", select_config, "key=value config file");
  select_over.add(select, "--cube", "cube", "cube payload");
  select_over.add(select, "--gt", "gt", "ground truth payload");
  select_over.add(select, "--max-bands", "max_bands", "upper bound on accepted bands");
  select_over.add(select, "--levels", "levels", "histogram levels for MI");
  select_over.add(select, "--threshold", "threshold", "minimum MI gain for acceptance");
  select_over.add(select, "--gest-rule", "gest_rule", "mean or pairwise");
  select_over.add(select, "--out", "out", "output directory");

  std::string model_path, render_cube, render_gt, render_out;
  auto* render = app.add_subcommand("render", "Render a saved model's classification map as PPM");
  render->add_option("--model", model_path, "model JSON written by run")->required();
  render->add_option("--cube", render_cube, "cube payload")->required();
  render->add_option("--gt", render_gt, "ground truth; when given, unlabeled pixels are masked black");
  render->add_option("--out", render_out, "output .ppm")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ExperimentConfig config = build_config(config_path, run_over);
      const SweepResult result = run_experiment(config);
      std::cout << summary_csv(result);
      std::cerr << "selected " << result.selection.accepted.size() << " bands; "
                << result.rows.size() << " rows written to " << config.out_dir.string() << '\n';
    } else if (*select) {
      const ExperimentConfig config = build_config(select_config, select_over);
      if (config.cube_path.empty() || config.gt_path.empty()) throw Error("select needs --cube and --gt");
      const HsiCube cube = load_cube(config.cube_path);
      const GroundTruthMap gt = load_ground_truth(config.gt_path, {cube.height, cube.width});
      for (const auto& w : gt.warnings) std::cerr << "warning: " << w << '\n';
      const SelectionState state = select_bands(cube, gt, config.selection);
      fs::create_directories(config.out_dir);
      std::ofstream out(config.out_dir / "selection_trace.csv", std::ios::trunc);
      if (!out) throw Error("cannot write " + (config.out_dir / "selection_trace.csv").string());
      write_trace_csv(state, out);
      for (std::size_t i = 0; i < state.accepted.size(); ++i) std::cout << (i ? "," : "") << state.accepted[i];
      std::cout << '\n';
    } else if (*render) {
      const TrainedModel model = load_model(model_path);
      const HsiCube cube = load_cube(render_cube);
      ClassificationMap map = render_map(model, cube);
      if (!render_gt.empty()) map = mask_unlabeled(map, load_ground_truth(render_gt, {cube.height, cube.width}));
      write_ppm(map, render_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "hyperspec-bench: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
