#ifndef HYPERSPEC_PIPELINE_HPP
#define HYPERSPEC_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hyperspec/band_selection.hpp"
#include "hyperspec/evaluation.hpp"
#include "hyperspec/grid_search.hpp"
#include "hyperspec/palette.hpp"

namespace hyperspec {

struct RosterEntry {
  std::string id;
  ClassifierSpec spec;
};

/// The ten standard variants, in report order:
/// svm-rbf, svm-linear, svm-sigmoid, rf, lda-linear, lda-diaglinear,
/// knn-1, knn-3, knn-5, knn-7.
std::vector<RosterEntry> benchmark_roster();
/// "all-paper" or a comma-separated list of roster ids.
std::vector<RosterEntry> parse_roster(const std::string& text);

struct ExperimentConfig {
  std::filesystem::path cube_path;
  std::filesystem::path gt_path;
  std::filesystem::path out_dir = "out";
  std::vector<Index> band_counts;  // empty: 10, 20, ..., 100 capped at B
  std::vector<RosterEntry> roster = benchmark_roster();
  double train_fraction = 0.5;
  SelectionConfig selection;
  int cv_folds = 5;
  std::uint64_t seed = 0;
  bool standardize = true;
  /// Wall-clock columns are written as 0 when off, making every output
  /// byte-reproducible.
  bool timing = true;
  bool write_maps = true;
};

/// Reads flat key=value lines ('#' starts a comment).
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
/// Applies one setting; keys: cube, gt, out, bands, classifiers, seed,
/// train_fraction, levels, threshold, gest_rule, max_bands, cv_folds,
/// standardize, timing, maps.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SweepRow {
  std::string classifier;
  Index bands_requested = 0;
  Index bands_used = 0;
  bool shortfall = false;
  ClassifierSpec chosen;
  EvalReport report;
};

struct SweepResult {
  SelectionState selection;
  Split split;  // over all accepted bands
  std::vector<SweepRow> rows;
  /// One per roster entry, trained at the largest band count.
  std::vector<TrainedModel> final_models;
  std::vector<Index> band_counts;
};

std::vector<Index> resolve_band_counts(const ExperimentConfig& config, Index bands);

/// Selects bands once up to the largest count, splits once, then for each
/// count trains every roster entry on the leading accepted bands (hyper-
/// parameters by stratified CV on the training portion) and evaluates.
SweepResult run_sweep(const ExperimentConfig& config, const HsiCube& cube, const GroundTruthMap& gt);

/// Predicts every pixel of the cube with the model's bands.
ClassificationMap render_map(const TrainedModel& model, const HsiCube& cube);

std::string sweep_csv(const SweepResult& result);
std::string summary_csv(const SweepResult& result);
std::string per_class_csv(const SweepResult& result);

/// Writes sweep.csv, summary.csv, per_class.csv and selection_trace.csv.
void emit_reports(const SweepResult& result, const std::filesystem::path& out_dir);

/// Loads data, runs the sweep, emits reports and, when enabled, writes
/// maps/*.ppm and models/*.json for the largest band count.
SweepResult run_experiment(const ExperimentConfig& config);

}  // namespace hyperspec

#endif
