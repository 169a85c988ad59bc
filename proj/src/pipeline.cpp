#include "hyperspec/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "hyperspec/csv.hpp"

namespace hyperspec {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("short write on " + path.string());
}

// Streams: 0 split, 1 + entry for CV and forest seeds.
std::uint64_t entry_seed(std::uint64_t seed, std::size_t entry, Index bands) {
  return derive_seed(derive_seed(seed, 1 + entry), static_cast<std::uint64_t>(bands));
}

}  // namespace

std::vector<Index> resolve_band_counts(const ExperimentConfig& config, Index bands) {
  std::vector<Index> counts;
  if (config.band_counts.empty()) {
    for (Index n = 10; n <= 100; n += 10) {
      const Index v = std::min(n, bands);
      if (counts.empty() || counts.back() != v) counts.push_back(v);
    }
    return counts;
  }
  for (Index n : config.band_counts) {
    if (n < 1) throw Error("band counts must be >= 1");
    if (!counts.empty() && n <= counts.back()) throw Error("band counts must be strictly increasing");
    counts.push_back(n);
  }
  return counts;
}

SweepResult run_sweep(const ExperimentConfig& config, const HsiCube& cube, const GroundTruthMap& gt) {
  if (config.roster.empty()) throw Error("classifier roster is empty");
  SweepResult result;
  result.band_counts = resolve_band_counts(config, cube.bands());

  SelectionConfig selection = config.selection;
  selection.max_bands = result.band_counts.back();
  result.selection = select_bands(cube, gt, selection);

  const LabeledSampleSet all = extract_labeled_samples(cube, gt, result.selection.accepted);
  result.split = stratified_split(all, {config.train_fraction, derive_seed(config.seed, 0)});

  TrainOptions options;
  options.standardize = config.standardize;

  const auto accepted = static_cast<Index>(result.selection.accepted.size());
  for (std::size_t ci = 0; ci < result.band_counts.size(); ++ci) {
    const Index requested = result.band_counts[ci];
    const Index used = std::min(requested, accepted);
    const LabeledSampleSet train_set = result.split.train.leading_bands(used);
    const LabeledSampleSet test_set = result.split.test.leading_bands(used);
    for (std::size_t e = 0; e < config.roster.size(); ++e) {
      const std::uint64_t seed = entry_seed(config.seed, e, requested);
      ClassifierSpec base = config.roster[e].spec;
      if (auto* rf = std::get_if<RfSpec>(&base)) rf->seed = seed;

      const auto t0 = Clock::now();
      const CvResult cv = grid_search_cv(train_set, default_grid(base, used), config.cv_folds, seed, options);
      TrainedModel model = train(cv.best, train_set, options);
      const double train_s = seconds_since(t0);
      const auto t1 = Clock::now();
      const auto pred = predict(model, test_set.features);
      const double predict_s = seconds_since(t1);

      SweepRow row;
      row.classifier = config.roster[e].id;
      row.bands_requested = requested;
      row.bands_used = used;
      row.shortfall = used < requested;
      row.chosen = cv.best;
      row.report = evaluate_predictions(test_set.labels, pred, all.num_classes);
      if (config.timing) {
        row.report.train_seconds = train_s;
        row.report.predict_seconds = predict_s;
      }
      result.rows.push_back(std::move(row));
      if (ci + 1 == result.band_counts.size()) result.final_models.push_back(std::move(model));
    }
  }
  return result;
}

ClassificationMap render_map(const TrainedModel& model, const HsiCube& cube) {
  MatrixXd pixels(cube.pixels(), model.dims());
  for (Index j = 0; j < model.dims(); ++j) {
    const Index b = model.band_ids[static_cast<std::size_t>(j)];
    if (b < 0 || b >= cube.bands()) throw Error("model band " + std::to_string(b) + " is not in the cube");
    pixels.col(j) = cube.band(b).cast<double>();
  }
  return {cube.height, cube.width, predict(model, pixels)};
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "classifier,bands_requested,bands_used,shortfall," << report_csv_header()
      << ",train_seconds,predict_seconds,params\n";
  for (const auto& r : result.rows) {
    out << r.classifier << ',' << r.bands_requested << ',' << r.bands_used << ',' << (r.shortfall ? 1 : 0) << ','
        << report_csv_row(r.report) << ',' << format_real(r.report.train_seconds) << ','
        << format_real(r.report.predict_seconds) << ',' << describe(r.chosen) << '\n';
  }
  return out.str();
}

std::string summary_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "classifier,bands," << report_csv_header() << '\n';
  if (result.rows.empty()) return out.str();
  const Index last = result.band_counts.back();
  for (const auto& r : result.rows) {
    if (r.bands_requested != last) continue;
    out << r.classifier << ',' << r.bands_used << ',' << report_csv_row(r.report) << '\n';
  }
  return out.str();
}

std::string per_class_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "classifier,bands_requested,class,tp,tn,fp,fn,sensitivity,specificity,precision,degenerate\n";
  for (const auto& r : result.rows) {
    write_per_class_csv(r.report, out, r.classifier + ',' + std::to_string(r.bands_requested) + ',');
  }
  return out.str();
}

void emit_reports(const SweepResult& result, const fs::path& out_dir) {
  if (result.rows.empty()) throw Error("no sweep rows to report");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  write_text(out_dir / "sweep.csv", sweep_csv(result));
  write_text(out_dir / "summary.csv", summary_csv(result));
  write_text(out_dir / "per_class.csv", per_class_csv(result));
  std::ostringstream trace;
  write_trace_csv(result.selection, trace);
  write_text(out_dir / "selection_trace.csv", trace.str());
}

SweepResult run_experiment(const ExperimentConfig& config) {
  if (config.cube_path.empty()) throw Error("no cube path given");
  if (config.gt_path.empty()) throw Error("no ground-truth path given");
  const HsiCube cube = load_cube(config.cube_path);
  const GroundTruthMap gt = load_ground_truth(config.gt_path, {cube.height, cube.width});
  SweepResult result = run_sweep(config, cube, gt);
  emit_reports(result, config.out_dir);
  if (config.write_maps) {
    const fs::path maps = config.out_dir / "maps";
    const fs::path models = config.out_dir / "models";
    fs::create_directories(maps);
    fs::create_directories(models);
    write_ppm(as_map(gt), maps / "ground_truth.ppm");
    for (std::size_t e = 0; e < config.roster.size(); ++e) {
      const auto& id = config.roster[e].id;
      const ClassificationMap map = render_map(result.final_models[e], cube);
      write_ppm(map, maps / (id + ".ppm"));
      write_ppm(mask_unlabeled(map, gt), maps / (id + "_masked.ppm"));
      save_model(result.final_models[e], models / (id + ".json"));
    }
  }
  return result;
}

}  // namespace hyperspec
