#include "hyperspec/classifier.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hyperspec/csv.hpp"

namespace hyperspec {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

json to_json(const MatrixXd& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Index>(data.size()) != rows * cols) throw Error("matrix payload size mismatch in model file");
  return Eigen::Map<const MatrixXd>(data.data(), rows, cols);
}

json to_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

VectorXd vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(data.data(), static_cast<Index>(data.size()));
}

json spec_to_json(const ClassifierSpec& spec) {
  return std::visit(
      overloaded{
          [](const SvmSpec& s) -> json {
            return {{"family", "svm"}, {"kernel", to_string(s.kernel)}, {"C", s.C}, {"gamma", s.gamma},
                    {"coef0", s.coef0}};
          },
          [](const KnnSpec& s) -> json { return {{"family", "knn"}, {"k", s.k}}; },
          [](const LdaSpec& s) -> json {
            return {{"family", "lda"}, {"mode", to_string(s.mode)}, {"ridge", s.ridge}};
          },
          [](const RfSpec& s) -> json {
            return {{"family", "rf"}, {"num_trees", s.num_trees}, {"max_features", s.max_features},
                    {"min_leaf", s.min_leaf}, {"seed", s.seed}};
          }},
      spec);
}

ClassifierSpec spec_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "svm") {
    return SvmSpec{kernel_kind_from_string(j.at("kernel").get<std::string>()), j.at("C").get<double>(),
                   j.at("gamma").get<double>(), j.at("coef0").get<double>()};
  }
  if (family == "knn") return KnnSpec{j.at("k").get<int>()};
  if (family == "lda") return LdaSpec{lda_mode_from_string(j.at("mode").get<std::string>()), j.at("ridge").get<double>()};
  if (family == "rf") {
    return RfSpec{j.at("num_trees").get<int>(), j.at("max_features").get<int>(), j.at("min_leaf").get<int>(),
                  j.at("seed").get<std::uint64_t>()};
  }
  throw Error("unknown classifier family '" + family + "'");
}

json params_to_json(const TrainedModel& model) {
  return std::visit(
      overloaded{
          [](const SvmModel& m) -> json {
            json machines = json::array();
            for (const auto& b : m.machines) {
              machines.push_back({{"positive", b.positive}, {"negative", b.negative},
                                  {"support_index", b.support_index}, {"coef", to_json(b.coef)},
                                  {"bias", b.bias}, {"converged", b.converged}});
            }
            return {{"kernel", {{"kind", to_string(m.kernel.kind)}, {"gamma", m.kernel.gamma},
                                {"coef0", m.kernel.coef0}}},
                    {"C", m.C}, {"classes", m.classes}, {"support_vectors", to_json(m.support_vectors)},
                    {"machines", machines}};
          },
          [](const KnnModel& m) -> json {
            return {{"k", m.k}, {"points", to_json(m.points)}, {"labels", m.labels}};
          },
          [](const LdaModel& m) -> json {
            return {{"mode", to_string(m.mode)},          {"classes", m.classes},
                    {"means", to_json(m.means)},          {"covariance", to_json(m.covariance)},
                    {"log_priors", to_json(m.log_priors)}, {"weights", to_json(m.weights)},
                    {"offsets", to_json(m.offsets)}};
          },
          [](const RandomForest& f) -> json {
            json trees = json::array();
            for (const auto& t : f.trees) {
              json nodes = json::array();
              for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
              trees.push_back(nodes);
            }
            return {{"num_classes", f.num_classes}, {"dims", f.dims}, {"trees", trees}};
          }},
      model.params);
}

void params_from_json(TrainedModel& model, const json& j) {
  if (std::holds_alternative<SvmSpec>(model.spec)) {
    SvmModel m;
    const auto& k = j.at("kernel");
    m.kernel = {kernel_kind_from_string(k.at("kind").get<std::string>()), k.at("gamma").get<double>(),
                k.at("coef0").get<double>()};
    m.C = j.at("C").get<double>();
    m.classes = j.at("classes").get<std::vector<Label>>();
    m.support_vectors = matrix_from_json(j.at("support_vectors"));
    for (const auto& b : j.at("machines")) {
      BinarySvm machine;
      machine.positive = b.at("positive").get<Label>();
      machine.negative = b.at("negative").get<Label>();
      machine.support_index = b.at("support_index").get<std::vector<Index>>();
      machine.coef = vector_from_json(b.at("coef"));
      machine.bias = b.at("bias").get<double>();
      machine.converged = b.at("converged").get<bool>();
      m.machines.push_back(std::move(machine));
    }
    model.params = std::move(m);
  } else if (std::holds_alternative<KnnSpec>(model.spec)) {
    model.params = KnnModel{matrix_from_json(j.at("points")), j.at("labels").get<std::vector<Label>>(), j.at("k").get<int>()};
  } else if (std::holds_alternative<LdaSpec>(model.spec)) {
    LdaModel m;
    m.mode = lda_mode_from_string(j.at("mode").get<std::string>());
    m.classes = j.at("classes").get<std::vector<Label>>();
    m.means = matrix_from_json(j.at("means"));
    m.covariance = matrix_from_json(j.at("covariance"));
    m.log_priors = vector_from_json(j.at("log_priors"));
    m.weights = matrix_from_json(j.at("weights"));
    m.offsets = vector_from_json(j.at("offsets"));
    model.params = std::move(m);
  } else {
    RandomForest f;
    f.num_classes = j.at("num_classes").get<Label>();
    f.dims = j.at("dims").get<Index>();
    for (const auto& t : j.at("trees")) {
      DecisionTree tree;
      for (const auto& n : t) {
        tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                              n.at(4).get<Label>()});
      }
      f.trees.push_back(std::move(tree));
    }
    model.params = std::move(f);
  }
}

}  // namespace

void validate(const ClassifierSpec& spec) {
  std::visit(overloaded{[](const SvmSpec& s) {
                          if (!(s.C > 0.0)) throw Error("SVM C must be positive");
                          validate(KernelParams{s.kernel, s.gamma, s.coef0});
                        },
                        [](const KnnSpec& s) {
                          if (s.k < 1) throw Error("k must be >= 1");
                        },
                        [](const LdaSpec& s) {
                          if (s.ridge < 0.0) throw Error("LDA ridge must be non-negative");
                        },
                        [](const RfSpec& s) {
                          if (s.num_trees < 1) throw Error("forest needs at least one tree");
                          if (s.max_features < 0) throw Error("max_features must be >= 0 (0 = sqrt)");
                          if (s.min_leaf < 1) throw Error("min_leaf must be >= 1");
                        }},
             spec);
}

std::string describe(const ClassifierSpec& spec) {
  return std::visit(
      overloaded{
          [](const SvmSpec& s) {
            return "svm(kernel=" + to_string(s.kernel) + ";C=" + format_real(s.C) +
                   ";gamma=" + format_real(s.gamma) + ";coef0=" + format_real(s.coef0) + ")";
          },
          [](const KnnSpec& s) { return "knn(k=" + std::to_string(s.k) + ")"; },
          [](const LdaSpec& s) { return "lda(mode=" + to_string(s.mode) + ";ridge=" + format_real(s.ridge) + ")"; },
          [](const RfSpec& s) {
            return "rf(trees=" + std::to_string(s.num_trees) + ";max_features=" +
                   (s.max_features > 0 ? std::to_string(s.max_features) : std::string("sqrt")) +
                   ";min_leaf=" + std::to_string(s.min_leaf) + ";seed=" + std::to_string(s.seed) + ")";
          }},
      spec);
}

Standardizer Standardizer::fit(const MatrixXd& X) {
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  s.scale.resize(X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - s.mean(j)).square().mean();
    s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

MatrixXd Standardizer::apply(const MatrixXd& X) const {
  if (X.cols() != mean.size()) throw Error("feature count differs from the standardizer's");
  return ((X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

TrainedModel train(const ClassifierSpec& spec, const LabeledSampleSet& set, const TrainOptions& options) {
  validate(spec);
  if (set.size() == 0) throw Error("empty training set");
  TrainedModel model;
  model.spec = spec;
  model.band_ids = set.band_ids;
  if (static_cast<Index>(model.band_ids.size()) != set.dims()) {
    model.band_ids.resize(static_cast<std::size_t>(set.dims()));
    std::iota(model.band_ids.begin(), model.band_ids.end(), Index{0});
  }
  model.num_classes = set.num_classes;

  const bool scaled = options.standardize && !std::holds_alternative<RfSpec>(spec);
  LabeledSampleSet work;
  const LabeledSampleSet* data = &set;
  if (scaled) {
    model.standardizer = Standardizer::fit(set.features);
    work = set;
    work.features = model.standardizer->apply(set.features);
    data = &work;
  }

  model.params = std::visit(
      overloaded{
          [&](const SvmSpec& s) -> decltype(model.params) {
            return svm_train_multiclass(*data, {s.kernel, s.gamma, s.coef0}, s.C, options.smo);
          },
          [&](const KnnSpec& s) -> decltype(model.params) { return knn_fit(*data, s.k); },
          [&](const LdaSpec& s) -> decltype(model.params) { return lda_fit(*data, s.mode, s.ridge); },
          [&](const RfSpec& s) -> decltype(model.params) {
            return rf_fit(*data, {s.num_trees, s.max_features, s.min_leaf, s.seed});
          }},
      spec);
  return model;
}

std::vector<Label> predict(const TrainedModel& model, const MatrixXd& features) {
  if (features.cols() != model.dims()) {
    throw Error("feature count " + std::to_string(features.cols()) + " differs from the model's " +
                std::to_string(model.dims()));
  }
  const MatrixXd X = model.standardizer ? model.standardizer->apply(features) : features;
  return std::visit(overloaded{[&](const SvmModel& m) { return svm_predict(m, X); },
                               [&](const KnnModel& m) { return knn_predict_batch(m, X); },
                               [&](const LdaModel& m) { return lda_predict(m, X); },
                               [&](const RandomForest& m) { return rf_predict_batch(m, X); }},
                    model.params);
}

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["spec"] = spec_to_json(model.spec);
  j["band_ids"] = model.band_ids;
  j["num_classes"] = model.num_classes;
  if (model.standardizer) {
    j["standardizer"] = {{"mean", to_json(model.standardizer->mean)}, {"scale", to_json(model.standardizer->scale)}};
  } else {
    j["standardizer"] = nullptr;
  }
  j["params"] = params_to_json(model);
  return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    TrainedModel model;
    model.spec = spec_from_json(j.at("spec"));
    model.band_ids = j.at("band_ids").get<std::vector<Index>>();
    model.num_classes = j.at("num_classes").get<Label>();
    if (!j.at("standardizer").is_null()) {
      model.standardizer = Standardizer{vector_from_json(j["standardizer"].at("mean")),
                                        vector_from_json(j["standardizer"].at("scale"))};
    }
    params_from_json(model, j.at("params"));
    return model;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace hyperspec
