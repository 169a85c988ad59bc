// Acceptance gate: one PASS/FAIL/SKIP line per criterion.
// Dataset criteria read <dir>/<name>.hsib and <dir>/<name>.gt from
// HYPERSPEC_DATA_DIR (names: indian_pines, salinas, pavia_university).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "hyperspec/band_selection.hpp"
#include "hyperspec/info_theory.hpp"
#include "hyperspec/pipeline.hpp"
#include "info_oracle.hpp"
#include "knn_oracle.hpp"
#include "selection_oracle.hpp"
#include "svm_checks.hpp"
#include "synthetic.hpp"

using namespace hyperspec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kPass;
  std::string detail;
};

Outcome fail(std::string why) { return {Outcome::kFail, std::move(why)}; }
Outcome skip(std::string why) { return {Outcome::kSkip, std::move(why)}; }

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.kind == Outcome::kPass && budget_s > 0 && s >= budget_s) {
    o = fail("runtime " + std::to_string(s) + " s exceeds " + std::to_string(budget_s) + " s");
  }
  const char* tag = o.kind == Outcome::kPass ? "PASS" : o.kind == Outcome::kFail ? "FAIL" : "SKIP";
  if (o.kind == Outcome::kFail) ++failures;
  std::printf("%s %2d %s (%.3f s)%s%s\n", tag, id, name.c_str(), s, o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Outcome info_theory_properties() {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const Symbol kx = static_cast<Symbol>(1 + rng() % 16), ky = static_cast<Symbol>(1 + rng() % 16);
    std::vector<Symbol> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(kx));
      // half the trials make y depend on x
      y[i] = trial % 2 ? static_cast<Symbol>((x[i] + rng() % 2) % ky) : static_cast<Symbol>(rng() % static_cast<std::uint64_t>(ky));
    }
    const double mxy = mutual_information(x, y);
    const double myx = mutual_information(y, x);
    const double mxx = mutual_information(x, x);
    const double hx = entropy(histogram(x));
    const double oracle = testing::mi_double_sum(x, y);
    if (mxy < 0.0) return fail("negative MI at trial " + std::to_string(trial));
    if (std::abs(mxy - myx) > 1e-12) return fail("asymmetric MI at trial " + std::to_string(trial));
    if (std::abs(mxx - hx) > 1e-12) return fail("MI(x,x) != H(x) at trial " + std::to_string(trial));
    if (std::abs(mxy - oracle) > 1e-12) {
      return fail("entropy path " + fmt(mxy) + " vs double sum " + fmt(oracle) + " at trial " + std::to_string(trial));
    }
  }
  return {};
}

Outcome band_selection_three_band() {
  const auto t = testing::three_band_cube();
  const auto s = select_bands(t.cube, t.gt, SelectionConfig{});
  if (s.accepted != std::vector<Index>{0}) return fail("accepted set is not [0]");
  bool dup_rejected = false;
  double last = -1.0;
  std::vector<Index> current;
  for (const auto& step : s.trace) {
    std::vector<Index> trial = current;
    trial.push_back(step.band);
    const double direct = testing::oracle_mi(build_gest(t.cube, trial), t.gt, 256);
    if (std::abs(direct - step.trial_mi_bits) > 1e-12) return fail("trace MI differs from direct evaluation");
    if (step.band == 1 && !step.accepted) dup_rejected = true;
    if (step.accepted) {
      if (!(step.trial_mi_bits > last)) return fail("MI not strictly increasing at acceptance");
      last = step.trial_mi_bits;
      current = trial;
    }
  }
  if (!dup_rejected) return fail("duplicate band was not rejected");
  return {};
}

Outcome svm_kkt() {
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_binary_problem(i);
    const auto r = smo_solve(p.X, p.y, p.kernel, p.C, {});
    if (!r.converged) return fail("problem " + std::to_string(i) + " did not converge");
    const auto k = testing::check_kkt(p.X, p.y, p.kernel, p.C, r, 1e-3);
    if (!k.box_ok) return fail("box constraint violated on problem " + std::to_string(i));
    if (k.worst_violation > 0.0) {
      return fail("KKT violated by " + fmt(k.worst_violation) + " on problem " + std::to_string(i));
    }
    if (k.equality_residual > 1e-6) return fail("sum alpha y = " + fmt(k.equality_residual));
  }
  LabeledSampleSet xor_set;
  xor_set.features.resize(4, 2);
  xor_set.features << 0, 0, 1, 1, 0, 1, 1, 0;
  xor_set.labels = {1, 1, 2, 2};
  xor_set.num_classes = 2;
  const auto m = svm_train_multiclass(xor_set, {KernelKind::kRbf, 1.0, 0.0}, 100.0);
  if (svm_predict(m, xor_set.features) != xor_set.labels) return fail("XOR not fitted 4/4");
  return {};
}

Outcome knn_oracle_agreement() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2, 2);
  int queries = 0;
  while (queries < 1000) {
    const Index n = 1 + static_cast<Index>(rng() % 50);
    const Index d = 1 + static_cast<Index>(rng() % 4);
    const bool grid = rng() % 2 == 0;
    LabeledSampleSet s;
    s.num_classes = 5;
    s.features.resize(n, d);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) s.features(i, j) = grid ? std::round(u(rng)) : u(rng);
      s.labels.push_back(static_cast<Label>(1 + rng() % 5));
    }
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min<Index>(n, 7)));
    const auto model = knn_fit(s, k);
    for (int q = 0; q < 10; ++q, ++queries) {
      VectorXd x(d);
      for (Index j = 0; j < d; ++j) x(j) = grid ? std::round(u(rng)) : u(rng);
      if (knn_predict(model, x) != testing::knn_exhaustive(s, x, k)) {
        return fail("disagreement at query " + std::to_string(queries));
      }
    }
  }
  return {};
}

Outcome lda_checks() {
  LabeledSampleSet s;
  s.features.resize(4, 1);
  s.features << 0, 1, 4, 5;
  s.labels = {1, 1, 2, 2};
  s.num_classes = 2;
  const auto m = lda_fit(s, LdaMode::kLinear);
  MatrixXd q(2, 1);
  q << 0.0, 1.0;
  const MatrixXd d = lda_discriminants(m, q);
  const double g0 = d(0, 0) - d(0, 1), g1 = d(1, 0) - d(1, 1);
  const double boundary = -g0 / (g1 - g0);
  if (std::abs(boundary - 2.5) > 1e-9) return fail("boundary at " + fmt(boundary));

  // symmetric crosses around each mean give an exactly diagonal pooled covariance
  LabeledSampleSet c;
  c.num_classes = 3;
  const double cx[] = {0, 4, -3}, cy[] = {0, 1, 5};
  c.features.resize(12, 2);
  Index r = 0;
  for (Label k = 0; k < 3; ++k) {
    for (auto [dx, dy] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 2.0}, {0.0, -2.0}}) {
      c.features.row(r++) << cx[k] + dx, cy[k] + dy;
      c.labels.push_back(k + 1);
    }
  }
  const auto lin = lda_fit(c, LdaMode::kLinear);
  const auto diag = lda_fit(c, LdaMode::kDiagLinear);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-8, 8);
  MatrixXd probe(1000, 2);
  for (Index i = 0; i < probe.rows(); ++i) probe.row(i) << u(rng), u(rng);
  if (lda_predict(lin, probe) != lda_predict(diag, probe)) return fail("diaglinear differs from linear");
  return {};
}

Outcome rf_checks() {
  MatrixXd centers(2, 4);
  centers << 0, 0, 0, 0, 5, 5, 5, 5;
  const auto s = testing::gaussian_blobs(centers, 100, 1.0, 6);
  const ForestParams p{100, 0, 1, 77};
  TrainedModel a, b;
  a = train(RfSpec{p.num_trees, p.max_features, p.min_leaf, p.seed}, s);
  b = train(RfSpec{p.num_trees, p.max_features, p.min_leaf, p.seed}, s);
  if (model_to_json(a) != model_to_json(b)) return fail("two runs differ");
  if (predict(a, s.features) != s.labels) return fail("training accuracy below 100%");
  return {};
}

Outcome evaluation_example() {
  Matrix<std::int64_t> m(2, 2);
  m << 20, 5, 10, 15;
  const auto cm = make_confusion_matrix(m);
  const auto c1 = per_class_binary_counts(cm, 1);
  const auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  if (!near(overall_accuracy(cm), 0.70)) return fail("oa");
  if (!near(cohen_kappa(cm), 0.40)) return fail("kappa");
  if (!near(sensitivity(c1), 0.80)) return fail("sensitivity");
  if (!near(specificity(c1), 0.60)) return fail("specificity");
  if (!near(precision(c1), 2.0 / 3.0)) return fail("precision");
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every regular file under `dir`, path-sorted, concatenated with names.
std::string tree_digest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + '\n' + slurp(f);
  return all;
}

Outcome pipeline_end_to_end() {
  const auto scene = testing::planted_scene(30, 30, 20, 4, 0.5, 2024);
  const auto dir = testing::scratch_dir("acceptance_pipeline");
  save_cube(scene.cube, dir / "scene.hsib");
  save_ground_truth(scene.gt, dir / "scene.gt");
  ExperimentConfig config;
  config.cube_path = dir / "scene.hsib";
  config.gt_path = dir / "scene.gt";
  config.seed = 7;
  config.timing = false;
  std::string digest[2];
  SweepResult result;
  for (int run = 0; run < 2; ++run) {
    config.out_dir = dir / ("run" + std::to_string(run));
    result = run_experiment(config);
    digest[run] = tree_digest(config.out_dir);
  }
  if (digest[0] != digest[1]) return fail("outputs differ across runs");
  const Index last = result.band_counts.back();
  std::map<std::string, double> oa;
  for (const auto& r : result.rows) {
    if (r.bands_requested == last) oa[r.classifier] = r.report.oa;
  }
  if (oa.size() != 10) return fail(std::to_string(oa.size()) + " roster variants ran");
  std::string detail;
  bool ok = true;
  for (const char* id : {"svm-rbf", "rf", "knn-1"}) {
    detail += std::string(detail.empty() ? "" : " ") + id + "=" + fmt(oa[id]);
    ok = ok && oa[id] >= 0.95;
  }
  if (!ok) return fail("OA below 0.95: " + detail);
  return {Outcome::kPass, detail};
}

struct Dataset {
  std::string name;
  std::vector<Index> band_counts;
};

// Runs the full roster and returns rows keyed by (classifier, bands).
std::optional<std::map<std::pair<std::string, Index>, SweepRow>> dataset_rows(const Dataset& ds, std::string& why) {
  const char* root = std::getenv("HYPERSPEC_DATA_DIR");
  if (!root || !*root) {
    why = "HYPERSPEC_DATA_DIR not set";
    return std::nullopt;
  }
  const fs::path cube = fs::path(root) / (ds.name + ".hsib");
  const fs::path gt = fs::path(root) / (ds.name + ".gt");
  if (!fs::exists(cube) || !fs::exists(gt)) {
    why = cube.string() + " or " + gt.string() + " missing";
    return std::nullopt;
  }
  ExperimentConfig config;
  config.cube_path = cube;
  config.gt_path = gt;
  config.band_counts = ds.band_counts;
  config.out_dir = testing::scratch_dir("acceptance_" + ds.name);
  config.write_maps = false;
  const auto result = run_experiment(config);
  std::map<std::pair<std::string, Index>, SweepRow> rows;
  for (const auto& r : result.rows) rows[{r.classifier, r.bands_requested}] = r;
  return rows;
}

// LDA (either mode) must be the fastest family at every band count.
std::string lda_fastest(const std::map<std::pair<std::string, Index>, SweepRow>& rows, Index bands) {
  double lda = 1e300, other = 1e300;
  for (const auto& [key, r] : rows) {
    if (key.second != bands) continue;
    double& slot = key.first.rfind("lda", 0) == 0 ? lda : other;
    slot = std::min(slot, r.report.time_seconds());
  }
  return lda < other ? "" : "LDA is not the fastest classifier";
}

Outcome indian_pines() {
  std::string why;
  const auto rows = dataset_rows({"indian_pines", {80}}, why);
  if (!rows) return skip(why);
  const auto& svm = rows->at({"svm-rbf", 80}).report;
  const auto& rf = rows->at({"rf", 80}).report;
  const auto& diag = rows->at({"lda-diaglinear", 80}).report;
  const std::string d = "svm-rbf oa=" + fmt(svm.oa) + " kappa=" + fmt(svm.kappa);
  if (std::abs(svm.oa - 0.9327) > 0.030) return fail(d);
  if (std::abs(svm.kappa - 0.9282) > 0.04) return fail(d);
  if (!(svm.oa > rf.oa && rf.oa > diag.oa)) return fail("ordering SVM-RBF > RF > LDA-diaglinear broken");
  if (auto e = lda_fastest(*rows, 80); !e.empty()) return fail(e);
  return {Outcome::kPass, d};
}

Outcome salinas() {
  std::string why;
  const auto rows = dataset_rows({"salinas", {80}}, why);
  if (!rows) return skip(why);
  const auto& rf = rows->at({"rf", 80}).report;
  const auto& sig = rows->at({"svm-sigmoid", 80}).report;
  const std::string d = "rf oa=" + fmt(rf.oa) + " svm-sigmoid oa=" + fmt(sig.oa);
  if (std::abs(rf.oa - 0.9709) > 0.030) return fail(d);
  if (!(sig.oa < 0.60)) return fail(d);
  if (auto e = lda_fastest(*rows, 80); !e.empty()) return fail(e);
  return {Outcome::kPass, d};
}

Outcome pavia() {
  std::string why;
  const auto rows = dataset_rows({"pavia_university", {35, 80}}, why);
  if (!rows) return skip(why);
  double best35 = 0.0;
  for (const auto& [key, r] : *rows) {
    if (key.second == 35) best35 = std::max(best35, r.report.oa);
  }
  const auto& rf = rows->at({"rf", 80}).report;
  const std::string d = "best oa@35=" + fmt(best35) + " rf oa@80=" + fmt(rf.oa);
  if (best35 < 0.88) return fail(d);
  if (std::abs(rf.oa - 0.9550) > 0.030) return fail(d);
  if (auto e = lda_fastest(*rows, 80); !e.empty()) return fail(e);
  return {Outcome::kPass, d};
}

}  // namespace

int main() {
  criterion(1, "info_theory MI properties on 10,000 random histograms", 10.0, info_theory_properties);
  criterion(2, "band_selection three-band cube", 1.0, band_selection_three_band);
  criterion(3, "SVM SMO KKT on 100 binary problems and RBF XOR", 30.0, svm_kkt);
  criterion(4, "KNN agrees with exhaustive scan on 1,000 queries", 5.0, knn_oracle_agreement);
  criterion(5, "LDA 1-D boundary and diaglinear equivalence", 0.0, lda_checks);
  criterion(6, "random forest determinism and blob fit", 0.0, rf_checks);
  criterion(7, "evaluation metrics on [[20,5],[10,15]]", 0.0, evaluation_example);
  criterion(8, "pipeline end to end on a 30x30x20 planted cube", 120.0, pipeline_end_to_end);
  criterion(9, "Indian Pines at 80 bands", 0.0, indian_pines);
  criterion(10, "Salinas at 80 bands", 0.0, salinas);
  criterion(11, "Pavia University at 35 and 80 bands", 0.0, pavia);
  return failures == 0 ? 0 : 1;
}
