#include <doctest.h>

#include <fstream>

#include "hyperspec/classifier.hpp"
#include "hyperspec/grid_search.hpp"
#include "synthetic.hpp"

using namespace hyperspec;

namespace {

LabeledSampleSet three_blobs(std::uint64_t seed = 17) {
  MatrixXd centers(3, 4);
  centers << 0, 0, 0, 0, 3, 3, 0, 0, 0, 3, 3, 3;
  auto s = testing::gaussian_blobs(centers, 25, 0.8, seed);
  s.band_ids = {4, 9, 13, 20};
  return s;
}

std::vector<ClassifierSpec> every_family() {
  SvmSpec rbf{KernelKind::kRbf, 10.0, 0.25, 0.0};
  SvmSpec lin{KernelKind::kLinear, 1.0, 1.0, 0.0};
  SvmSpec sig{KernelKind::kSigmoid, 1.0, 0.05, -1.0};
  return {rbf, lin, sig, KnnSpec{3}, LdaSpec{LdaMode::kLinear, 1e-6}, LdaSpec{LdaMode::kDiagLinear, 1e-6},
          RfSpec{20, 0, 1, 99}};
}

}  // namespace

TEST_CASE("describe") {
  CHECK(describe(SvmSpec{KernelKind::kRbf, 10.0, 0.1, 0.0}) == "svm(kernel=rbf;C=10;gamma=0.1;coef0=0)");
  CHECK(describe(KnnSpec{5}) == "knn(k=5)");
  CHECK(describe(RfSpec{}) == "rf(trees=100;max_features=sqrt;min_leaf=1;seed=0)");
}

TEST_CASE("validate rejects bad hyperparameters") {
  CHECK_THROWS_AS(validate(SvmSpec{KernelKind::kRbf, 0.0, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(SvmSpec{KernelKind::kRbf, 1.0, -1.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(KnnSpec{0}), Error);
  CHECK_THROWS_AS(validate(LdaSpec{LdaMode::kLinear, -1.0}), Error);
  CHECK_THROWS_AS(validate(RfSpec{0, 0, 1, 0}), Error);
  CHECK_NOTHROW(validate(SvmSpec{}));
}

TEST_CASE("standardizer") {
  MatrixXd X(4, 3);
  X << 1, 5, 7, 2, 5, 9, 3, 5, 11, 4, 5, 13;
  const auto s = Standardizer::fit(X);
  CHECK(s.scale(1) == 1.0);
  const MatrixXd Z = s.apply(X);
  for (Index j : {0, 2}) {
    CHECK(std::abs(Z.col(j).mean()) < 1e-12);
    CHECK(Z.col(j).squaredNorm() / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(Z.col(1).isZero());
  CHECK_THROWS_AS(s.apply(MatrixXd(2, 2)), Error);
}

TEST_CASE("training and prediction for every family") {
  const auto s = three_blobs();
  for (const auto& spec : every_family()) {
    CAPTURE(describe(spec));
    const auto m = train(spec, s);
    CHECK(m.band_ids == s.band_ids);
    CHECK(m.standardizer.has_value() == !std::holds_alternative<RfSpec>(spec));
    const auto pred = predict(m, s.features);
    Index correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == s.labels[i];
    CHECK(static_cast<double>(correct) / static_cast<double>(pred.size()) > 0.9);
    CHECK_THROWS_AS(predict(m, MatrixXd(2, 3)), Error);
  }
}

TEST_CASE("model JSON round trip preserves predictions exactly") {
  const auto s = three_blobs();
  const MatrixXd probe = MatrixXd::Random(200, 4) * 4.0 + MatrixXd::Constant(200, 4, 1.5);
  const auto dir = testing::scratch_dir("model_json");
  int idx = 0;
  for (const auto& spec : every_family()) {
    CAPTURE(describe(spec));
    const auto m = train(spec, s);
    const auto copy = model_from_json(model_to_json(m));
    CHECK(describe(copy.spec) == describe(m.spec));
    CHECK(copy.band_ids == m.band_ids);
    CHECK(copy.num_classes == m.num_classes);
    CHECK(predict(copy, probe) == predict(m, probe));
    if (std::holds_alternative<SvmSpec>(spec)) {
      // decision values survive bit for bit
      const auto& a = std::get<SvmModel>(m.params);
      const auto& b = std::get<SvmModel>(copy.params);
      const MatrixXd za = m.standardizer->apply(probe), zb = copy.standardizer->apply(probe);
      CHECK(svm_decision_values(a, za) == svm_decision_values(b, zb));
    }
    const auto path = dir / ("m" + std::to_string(idx++) + ".json");
    save_model(m, path);
    CHECK(predict(load_model(path), probe) == predict(m, probe));
    CHECK(model_to_json(load_model(path)) == model_to_json(m));
  }
  CHECK_THROWS_AS(model_from_json("{\"family\": \"nope\"}"), Error);
  CHECK_THROWS_AS(model_from_json("not json"), Error);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), Error);
}

TEST_CASE("stratified folds") {
  const auto s = three_blobs();
  const auto folds = stratified_folds(s, 5, 3);
  REQUIRE(folds.size() == static_cast<std::size_t>(s.size()));
  for (Label c = 1; c <= 3; ++c) {
    std::vector<int> per(5, 0);
    for (std::size_t i = 0; i < folds.size(); ++i) {
      if (s.labels[i] == c) ++per[static_cast<std::size_t>(folds[i])];
    }
    for (int v : per) CHECK(v == 5);
  }
  CHECK(stratified_folds(s, 5, 3) == folds);
  CHECK(stratified_folds(s, 5, 4) != folds);
  CHECK_THROWS_AS(stratified_folds(s, 1, 0), Error);
}

TEST_CASE("grid search") {
  const auto s = three_blobs(5);
  SUBCASE("single candidate is returned unevaluated") {
    const auto r = grid_search_cv(s, {KnnSpec{7}}, 5, 1);
    CHECK(std::get<KnnSpec>(r.best).k == 7);
    CHECK(r.mean_oa.empty());
  }
  SUBCASE("a clearly better candidate wins") {
    // gamma = 1000 memorizes the training folds and fails on held-out points
    const std::vector<ClassifierSpec> grid = {SvmSpec{KernelKind::kRbf, 1.0, 1000.0, 0.0},
                                              SvmSpec{KernelKind::kRbf, 1.0, 0.25, 0.0}};
    const auto r = grid_search_cv(s, grid, 5, 1);
    REQUIRE(r.mean_oa.size() == 2);
    CHECK(r.mean_oa[1] > r.mean_oa[0]);
    CHECK(std::get<SvmSpec>(r.best).gamma == 0.25);
    const auto again = grid_search_cv(s, grid, 5, 1);
    CHECK(again.mean_oa == r.mean_oa);
  }
  SUBCASE("too few samples per class") {
    auto small = s.subset(std::vector<Index>{0, 1, 2, 25, 26, 27, 50, 51, 52});
    CHECK_THROWS_AS(grid_search_cv(small, {KnnSpec{1}, KnnSpec{3}}, 5, 1), Error);
  }
  CHECK_THROWS_AS(grid_search_cv(s, {}, 5, 1), Error);
}

TEST_CASE("default grid") {
  CHECK(default_grid(SvmSpec{KernelKind::kRbf}, 20).size() == 16);
  CHECK(default_grid(SvmSpec{KernelKind::kSigmoid}, 20).size() == 16);
  // 1/d coincides with 1 when d = 1
  CHECK(default_grid(SvmSpec{KernelKind::kRbf}, 1).size() == 12);
  CHECK(default_grid(SvmSpec{KernelKind::kRbf}, 100).size() == 12);
  CHECK(default_grid(SvmSpec{KernelKind::kLinear}, 20).size() == 4);
  CHECK(default_grid(KnnSpec{3}, 20).size() == 1);
  CHECK(default_grid(LdaSpec{}, 20).size() == 1);
  CHECK(default_grid(RfSpec{}, 20).size() == 1);
}
