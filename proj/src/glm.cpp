#include "maintscope/glm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "maintscope/diagnostics.hpp"

namespace maintscope {

namespace {

const char* kPredictorNames[kPredictorCount] = {
    "commits", "muse", "mtbc", "contrib_start_rel",
    "mean_commit_versatility", "contrib_duration", "developer_versatility", "versatility_level"};

double floored_log(double v, double floor) { return std::log(std::max(v, floor)); }

}  // namespace

const char* predictor_name(Predictor p) { return kPredictorNames[static_cast<int>(p)]; }

std::optional<Predictor> predictor_from_name(const std::string& name) {
  for (int i = 0; i < kPredictorCount; ++i) {
    if (name == kPredictorNames[i]) return static_cast<Predictor>(i);
  }
  return std::nullopt;
}

PredictorVector PredictorVector::from_row(const DeveloperMetricsRow& row, double log_floor) {
  PredictorVector pv;
  auto set = [&](Predictor p, double v) { pv.values[static_cast<int>(p)] = v; };
  set(Predictor::Commits, floored_log(static_cast<double>(row.commits), log_floor));
  set(Predictor::Muse, floored_log(static_cast<double>(row.muse), log_floor));
  set(Predictor::Mtbc, floored_log(row.mtbc, log_floor));
  set(Predictor::ContribStartRel, std::log(row.contrib_start_rel + 0.1));
  set(Predictor::MeanCommitVersatility, floored_log(row.mean_commit_versatility, log_floor));
  set(Predictor::ContribDuration, std::log(row.contrib_duration + 0.1));
  set(Predictor::DeveloperVersatility,
      floored_log(static_cast<double>(row.developer_versatility), log_floor));
  set(Predictor::VersatilityLevel, floored_log(static_cast<double>(row.versatility_level), log_floor));
  return pv;
}

const PredictorTerm* CategoryModel::find(Predictor p) const {
  for (const auto& t : terms) {
    if (t.predictor == p) return &t;
  }
  return nullptr;
}

double CategoryModel::linear_predictor(const PredictorVector& pv) const {
  double lp = constant;
  for (const auto& t : terms) lp += t.coefficient * pv[t.predictor];
  return lp;
}

const CategoryModel& GlmModel::category(ChangeCategory c) const {
  switch (c) {
    case ChangeCategory::Corrective: return corrective;
    case ChangeCategory::Perfective: return perfective;
    case ChangeCategory::Adaptive: return adaptive;
    default: throw std::logic_error("no model for unclassified");
  }
}

CategoryModel& GlmModel::category(ChangeCategory c) {
  return const_cast<CategoryModel&>(static_cast<const GlmModel&>(*this).category(c));
}

GlmModel builtin_model() {
  using P = Predictor;
  GlmModel m;

  m.corrective.constant = -0.986;
  m.corrective.constant_std_error = 0.019;
  m.corrective.training_r2 = 0.832;
  m.corrective.terms = {
      {P::Commits, 0.797, 0.010},
      {P::Muse, 0.171, 0.010},
      {P::Mtbc, 0.012, 0.002},
      {P::ContribStartRel, 0.014, 0.001},
      {P::MeanCommitVersatility, 0.028, 0.009},
      {P::ContribDuration, 0.030, 0.002},
      {P::DeveloperVersatility, -0.205, 0.010},
      {P::VersatilityLevel, 0.181, 0.012},
  };

  m.perfective.constant = -3.092;
  m.perfective.constant_std_error = 0.048;
  m.perfective.training_r2 = 0.640;
  m.perfective.terms = {
      {P::Commits, 0.572, 0.020},
      {P::Muse, -0.288, 0.020},
      {P::Mtbc, -0.018, 0.004},
      {P::ContribDuration, -0.050, 0.005},
      {P::DeveloperVersatility, 0.394, 0.025},
      {P::VersatilityLevel, 0.483, 0.025},
  };

  m.adaptive.constant = -1.462;
  m.adaptive.constant_std_error = 0.020;
  m.adaptive.training_r2 = 0.759;
  m.adaptive.terms = {
      {P::Commits, 0.503, 0.015},
      {P::Muse, -0.135, 0.013},
      {P::ContribStartRel, -0.021, 0.001},
      {P::MeanCommitVersatility, 0.033, 0.013},
      {P::ContribDuration, -0.018, 0.002},
      {P::DeveloperVersatility, 0.243, 0.013},
      {P::VersatilityLevel, 0.437, 0.017},
  };

  return m;
}

const CategoryPrediction& MaintenanceProfile::category(ChangeCategory c) const {
  switch (c) {
    case ChangeCategory::Corrective: return corrective;
    case ChangeCategory::Perfective: return perfective;
    case ChangeCategory::Adaptive: return adaptive;
    default: throw std::logic_error("no prediction for unclassified");
  }
}

MaintenanceProfile predict(const DeveloperMetricsRow& row, const GlmModel& model, double log_floor) {
  PredictorVector pv = PredictorVector::from_row(row, log_floor);
  MaintenanceProfile profile;
  auto one = [&](const CategoryModel& cm) {
    CategoryPrediction p;
    p.linear_predictor = cm.linear_predictor(pv);
    p.count_estimate = std::exp(p.linear_predictor);
    return p;
  };
  profile.corrective = one(model.corrective);
  profile.perfective = one(model.perfective);
  profile.adaptive = one(model.adaptive);
  return profile;
}

namespace {

// Dense column-major matrix, just enough for the QR solve below.
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<double> data;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(size_t i, size_t j) { return data[j * rows + i]; }
  double at(size_t i, size_t j) const { return data[j * rows + i]; }
};

}  // namespace

CategoryModel fit(const std::vector<DeveloperMetricsRow>& rows, const std::vector<double>& responses,
                  const std::vector<Predictor>& selection, double log_floor) {
  size_t n = rows.size();
  size_t p = selection.size() + 1;  // intercept first
  if (responses.size() != n) throw std::invalid_argument("responses do not match rows");
  if (n < p + 1)
    throw std::invalid_argument("need at least " + std::to_string(p + 1) + " rows to fit " +
                                std::to_string(selection.size()) + " predictors");

  double y_mean = 0.0;
  for (double y : responses) y_mean += y;
  y_mean /= static_cast<double>(n);
  double sst = 0.0;
  for (double y : responses) sst += (y - y_mean) * (y - y_mean);

  CategoryModel model;
  if (sst == 0.0) {
    // Constant response: no slope information; the mean is the whole model.
    model.constant = y_mean;
    model.constant_std_error = 0.0;
    for (auto sel : selection) model.terms.push_back({sel, 0.0, 0.0});
    model.training_r2 = 0.0;
    return model;
  }

  Matrix design(n, p);
  std::vector<double> y(responses);
  for (size_t i = 0; i < n; ++i) {
    design.at(i, 0) = 1.0;
    PredictorVector pv = PredictorVector::from_row(rows[i], log_floor);
    for (size_t j = 0; j < selection.size(); ++j) design.at(i, j + 1) = pv[selection[j]];
  }

  // Householder QR, reflections applied to y as they are formed.
  std::vector<double> rdiag(p, 0.0);
  for (size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (size_t i = k; i < n; ++i) norm = std::hypot(norm, design.at(i, k));
    if (norm == 0.0) continue;  // exactly dependent column; caught below
    if (design.at(k, k) < 0) norm = -norm;
    rdiag[k] = -norm;
    for (size_t i = k; i < n; ++i) design.at(i, k) /= norm;
    design.at(k, k) += 1.0;
    for (size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (size_t i = k; i < n; ++i) s += design.at(i, k) * design.at(i, j);
      s = -s / design.at(k, k);
      for (size_t i = k; i < n; ++i) design.at(i, j) += s * design.at(i, k);
    }
    double s = 0.0;
    for (size_t i = k; i < n; ++i) s += design.at(i, k) * y[i];
    s = -s / design.at(k, k);
    for (size_t i = k; i < n; ++i) y[i] += s * design.at(i, k);
  }

  double max_diag = 0.0;
  for (size_t k = 0; k < p; ++k) max_diag = std::max(max_diag, std::abs(rdiag[k]));
  std::vector<std::string> collinear;
  for (size_t k = 0; k < p; ++k) {
    if (std::abs(rdiag[k]) <= 1e-10 * max_diag) {
      collinear.push_back(k == 0 ? "intercept" : predictor_name(selection[k - 1]));
    }
  }
  if (!collinear.empty()) {
    std::string what = "design matrix is rank deficient; collinear columns:";
    for (const auto& c : collinear) what += " " + c;
    throw SingularDesign(what, collinear);
  }

  // Back substitution: R beta = Q^T y.
  std::vector<double> beta(p, 0.0);
  for (size_t k = p; k-- > 0;) {
    double s = y[k];
    for (size_t j = k + 1; j < p; ++j) s -= design.at(k, j) * beta[j];
    beta[k] = s / rdiag[k];
  }

  // Residuals against the original design for SSE and self-consistency.
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double fitted = beta[0];
    PredictorVector pv = PredictorVector::from_row(rows[i], log_floor);
    for (size_t j = 0; j < selection.size(); ++j) fitted += beta[j + 1] * pv[selection[j]];
    double r = responses[i] - fitted;
    sse += r * r;
  }
  double sigma2 = sse / static_cast<double>(n - p);

  // Invert R (upper triangular, diagonal in rdiag, off-diagonal in design).
  Matrix rinv(p, p);
  for (size_t j = 0; j < p; ++j) {
    rinv.at(j, j) = 1.0 / rdiag[j];
    for (size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (size_t k = i + 1; k <= j; ++k) s += design.at(i, k) * rinv.at(k, j);
      rinv.at(i, j) = -s / rdiag[i];
    }
  }
  std::vector<double> se(p, 0.0);
  for (size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (size_t j = i; j < p; ++j) s += rinv.at(i, j) * rinv.at(i, j);
    se[i] = std::sqrt(sigma2 * s);
  }

  model.constant = beta[0];
  model.constant_std_error = se[0];
  for (size_t j = 0; j < selection.size(); ++j)
    model.terms.push_back({selection[j], beta[j + 1], se[j + 1]});
  model.training_r2 = 1.0 - sse / sst;
  return model;
}

double evaluate_category(const CategoryModel& model, const std::vector<DeveloperMetricsRow>& rows,
                         const std::vector<double>& responses, double log_floor) {
  if (rows.empty() || responses.size() != rows.size())
    throw std::invalid_argument("holdout rows and responses must be non-empty and aligned");
  double mean = 0.0;
  for (double y : responses) mean += y;
  mean /= static_cast<double>(responses.size());
  double sst = 0.0, sse = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    PredictorVector pv = PredictorVector::from_row(rows[i], log_floor);
    double r = responses[i] - model.linear_predictor(pv);
    sse += r * r;
    sst += (responses[i] - mean) * (responses[i] - mean);
  }
  if (sst == 0.0) {
    warn("", "", "holdout responses have zero variance; R^2 undefined");
    return std::numeric_limits<double>::quiet_NaN();
  }
  return 1.0 - sse / sst;
}

std::vector<double> log_responses(const std::vector<DeveloperMetricsRow>& rows, ChangeCategory c,
                                  double log_floor) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& row : rows) {
    int64_t count = 0;
    switch (c) {
      case ChangeCategory::Corrective: count = row.actual.corrective; break;
      case ChangeCategory::Perfective: count = row.actual.perfective; break;
      case ChangeCategory::Adaptive: count = row.actual.adaptive; break;
      default: break;
    }
    y.push_back(floored_log(static_cast<double>(count), log_floor));
  }
  return y;
}

EvaluationResult evaluate(const GlmModel& model, const std::vector<DeveloperMetricsRow>& rows,
                          double log_floor) {
  EvaluationResult res{};
  res.corrective_r2 = evaluate_category(
      model.corrective, rows, log_responses(rows, ChangeCategory::Corrective, log_floor), log_floor);
  res.perfective_r2 = evaluate_category(
      model.perfective, rows, log_responses(rows, ChangeCategory::Perfective, log_floor), log_floor);
  res.adaptive_r2 = evaluate_category(
      model.adaptive, rows, log_responses(rows, ChangeCategory::Adaptive, log_floor), log_floor);
  return res;
}

namespace {

uint64_t bounded_rand(std::mt19937_64& gen, uint64_t n) {
  // Rejection sampling keeps the shuffle identical on every platform.
  uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

}  // namespace

RepoSplit split_repos(std::vector<RepoId> repos, double train_fraction, uint64_t seed) {
  if (repos.size() < 2) throw std::invalid_argument("split needs at least 2 repositories");
  std::sort(repos.begin(), repos.end());
  repos.erase(std::unique(repos.begin(), repos.end()), repos.end());

  std::mt19937_64 gen(seed);
  for (size_t i = repos.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(bounded_rand(gen, i + 1));
    std::swap(repos[i], repos[j]);
  }

  size_t train_count = static_cast<size_t>(
      std::floor(static_cast<double>(repos.size()) * train_fraction + 1e-9));
  train_count = std::min(train_count, repos.size());

  RepoSplit split;
  split.train.assign(repos.begin(), repos.begin() + train_count);
  split.test.assign(repos.begin() + train_count, repos.end());
  return split;
}

namespace {

nlohmann::ordered_json category_to_json(const CategoryModel& cm) {
  nlohmann::ordered_json j;
  j["constant"] = cm.constant;
  j["constant_std_error"] = cm.constant_std_error;
  if (cm.training_r2) j["r2"] = *cm.training_r2;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : cm.terms) {
    terms.push_back({{"name", predictor_name(t.predictor)},
                     {"coefficient", t.coefficient},
                     {"std_error", t.std_error}});
  }
  j["predictors"] = terms;
  return j;
}

CategoryModel category_from_json(const nlohmann::json& j, const std::string& label) {
  CategoryModel cm;
  cm.constant = j.at("constant").get<double>();
  cm.constant_std_error = j.value("constant_std_error", 0.0);
  if (j.contains("r2")) cm.training_r2 = j["r2"].get<double>();
  for (const auto& t : j.at("predictors")) {
    std::string name = t.at("name").get<std::string>();
    auto p = predictor_from_name(name);
    if (!p) throw std::runtime_error("unknown predictor '" + name + "' in " + label + " model");
    cm.terms.push_back({*p, t.at("coefficient").get<double>(), t.value("std_error", 0.0)});
  }
  return cm;
}

}  // namespace

void save_model(const GlmModel& model, const std::string& path) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["log_base"] = "e";
  j["categories"]["corrective"] = category_to_json(model.corrective);
  j["categories"]["perfective"] = category_to_json(model.perfective);
  j["categories"]["adaptive"] = category_to_json(model.adaptive);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

GlmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("version", 0) != 1)
    throw std::runtime_error("unsupported model file version in " + path);
  if (j.value("log_base", "e") != "e")
    throw std::runtime_error("unsupported log base in " + path);
  const auto& cats = j.at("categories");
  GlmModel model;
  model.corrective = category_from_json(cats.at("corrective"), "corrective");
  model.perfective = category_from_json(cats.at("perfective"), "perfective");
  model.adaptive = category_from_json(cats.at("adaptive"), "adaptive");
  return model;
}

}  // namespace maintscope
