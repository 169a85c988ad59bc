#include <fstream>

#include "hyperspec/csv.hpp"
#include "hyperspec/pipeline.hpp"

namespace hyperspec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw Error("setting '" + key + "' expects a boolean, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error("setting '" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace

std::vector<RosterEntry> benchmark_roster() {
  return {
      {"svm-rbf", SvmSpec{KernelKind::kRbf}},
      {"svm-linear", SvmSpec{KernelKind::kLinear}},
      {"svm-sigmoid", SvmSpec{KernelKind::kSigmoid}},
      {"rf", RfSpec{}},
      {"lda-linear", LdaSpec{LdaMode::kLinear}},
      {"lda-diaglinear", LdaSpec{LdaMode::kDiagLinear}},
      {"knn-1", KnnSpec{1}},
      {"knn-3", KnnSpec{3}},
      {"knn-5", KnnSpec{5}},
      {"knn-7", KnnSpec{7}},
  };
}

std::vector<RosterEntry> parse_roster(const std::string& text) {
  const auto all = benchmark_roster();
  std::vector<RosterEntry> out;
  for (const auto& raw : split_fields(text)) {
    const std::string id = trim(raw);
    if (id.empty()) continue;
    if (id == "all-paper") {
      out.insert(out.end(), all.begin(), all.end());
      continue;
    }
    if (id.rfind("knn-", 0) == 0) {
      const auto k = parse_int("classifiers", id.substr(4));
      if (k < 1) throw Error("knn k must be >= 1 in '" + id + "'");
      out.push_back({id, KnnSpec{static_cast<int>(k)}});
      continue;
    }
    const auto it = std::find_if(all.begin(), all.end(), [&](const RosterEntry& e) { return e.id == id; });
    if (it == all.end()) throw Error("unknown classifier '" + id + "'");
    out.push_back(*it);
  }
  if (out.empty()) throw Error("classifier roster is empty");
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "cube") {
    c.cube_path = value;
  } else if (key == "gt") {
    c.gt_path = value;
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "bands") {
    c.band_counts.clear();
    for (const auto& f : split_fields(value)) {
      if (trim(f).empty()) continue;
      const auto n = parse_int(key, trim(f));
      if (n < 1) throw Error("band counts must be >= 1");
      if (!c.band_counts.empty() && n <= c.band_counts.back()) throw Error("band counts must be strictly increasing");
      c.band_counts.push_back(static_cast<Index>(n));
    }
  } else if (key == "classifiers") {
    c.roster = parse_roster(value);
  } else if (key == "seed") {
    try {
      std::size_t pos = 0;
      c.seed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error("setting 'seed' expects an unsigned integer, got '" + value + "'");
    }
  } else if (key == "train_fraction") {
    c.train_fraction = parse_real(value);
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw Error("train_fraction must lie in (0, 1)");
  } else if (key == "levels") {
    c.selection.levels = static_cast<int>(parse_int(key, value));
    if (c.selection.levels < 2) throw Error("levels must be >= 2");
  } else if (key == "threshold") {
    c.selection.threshold = parse_real(value);
    if (c.selection.threshold < 0.0) throw Error("threshold must be non-negative");
  } else if (key == "gest_rule") {
    if (value == "mean") c.selection.gest_rule = GestRule::kMeanOfAccepted;
    else if (value == "pairwise") c.selection.gest_rule = GestRule::kPairwiseRecursive;
    else throw Error("gest_rule must be 'mean' or 'pairwise'");
  } else if (key == "max_bands") {
    c.selection.max_bands = static_cast<Index>(parse_int(key, value));
    if (c.selection.max_bands < 1) throw Error("max_bands must be >= 1");
  } else if (key == "cv_folds") {
    c.cv_folds = static_cast<int>(parse_int(key, value));
    if (c.cv_folds < 2) throw Error("cv_folds must be >= 2");
  } else if (key == "standardize") {
    c.standardize = parse_bool(key, value);
  } else if (key == "timing") {
    c.timing = parse_bool(key, value);
  } else if (key == "maps") {
    c.write_maps = parse_bool(key, value);
  } else {
    throw Error("unknown setting '" + key + "'");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  ExperimentConfig c;
  for (const auto& [k, v] : read_key_values(path)) apply_setting(c, k, v);
  return c;
}

}  // namespace hyperspec
