#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maintscope/classify.hpp"
#include "maintscope/metrics.hpp"

namespace maintscope {

enum class Predictor {
  Commits,
  Muse,
  Mtbc,
  ContribStartRel,
  MeanCommitVersatility,
  ContribDuration,
  DeveloperVersatility,
  VersatilityLevel,
};

inline constexpr int kPredictorCount = 8;

const char* predictor_name(Predictor p);
std::optional<Predictor> predictor_from_name(const std::string& name);

// Natural-log transformed predictor values. ContribStartRel and
// ContribDuration carry a fixed +0.1 offset; every other metric is floored
// at `log_floor` before the log so zero values stay finite.
struct PredictorVector {
  std::array<double, kPredictorCount> values{};

  static PredictorVector from_row(const DeveloperMetricsRow& row, double log_floor = 0.001);
  double operator[](Predictor p) const { return values[static_cast<int>(p)]; }
};

struct PredictorTerm {
  Predictor predictor;
  double coefficient = 0.0;
  double std_error = 0.0;
};

struct CategoryModel {
  double constant = 0.0;
  double constant_std_error = 0.0;
  std::vector<PredictorTerm> terms;  // present predictors only, in P1..P8 order
  std::optional<double> training_r2;

  const PredictorTerm* find(Predictor p) const;
  double linear_predictor(const PredictorVector& pv) const;
};

struct GlmModel {
  CategoryModel corrective;
  CategoryModel perfective;
  CategoryModel adaptive;

  const CategoryModel& category(ChangeCategory c) const;
  CategoryModel& category(ChangeCategory c);
};

// The published developer-level maintenance-activity model: coefficients,
// standard errors, and constants, with the absent cells absent.
GlmModel builtin_model();

struct CategoryPrediction {
  double linear_predictor = 0.0;
  double count_estimate = 1.0;  // exp(linear_predictor)
};

struct MaintenanceProfile {
  CategoryPrediction corrective;
  CategoryPrediction perfective;
  CategoryPrediction adaptive;

  const CategoryPrediction& category(ChangeCategory c) const;
};

MaintenanceProfile predict(const DeveloperMetricsRow& row, const GlmModel& model,
                           double log_floor = 0.001);

class SingularDesign : public std::runtime_error {
public:
  SingularDesign(const std::string& what, std::vector<std::string> cols)
      : std::runtime_error(what), columns(std::move(cols)) {}
  std::vector<std::string> columns;
};

// Ordinary least squares on [1, selected predictors] via Householder QR.
// `responses` are already on the model's (log) scale. Standard errors come
// from the unbiased residual variance; training R^2 is stored on the result.
CategoryModel fit(const std::vector<DeveloperMetricsRow>& rows, const std::vector<double>& responses,
                  const std::vector<Predictor>& selection, double log_floor = 0.001);

// Holdout R^2 of one category model: 1 - SSE/SST on the given responses,
// SST about the holdout mean. Zero-variance holdout yields NaN.
double evaluate_category(const CategoryModel& model, const std::vector<DeveloperMetricsRow>& rows,
                         const std::vector<double>& responses, double log_floor = 0.001);

struct EvaluationResult {
  double corrective_r2;
  double perfective_r2;
  double adaptive_r2;
};

// Responses derived from the rows' actual per-category commit counts,
// log-transformed with the same floor the fit uses.
EvaluationResult evaluate(const GlmModel& model, const std::vector<DeveloperMetricsRow>& rows,
                          double log_floor = 0.001);

std::vector<double> log_responses(const std::vector<DeveloperMetricsRow>& rows, ChangeCategory c,
                                  double log_floor = 0.001);

struct RepoSplit {
  std::vector<RepoId> train;
  std::vector<RepoId> test;
};

// Deterministic by-repository split; all of a repo's developers land on the
// same side. train gets floor(n * train_fraction) repos, the rest go to test.
RepoSplit split_repos(std::vector<RepoId> repos, double train_fraction, uint64_t seed);

GlmModel load_model(const std::string& path);
void save_model(const GlmModel& model, const std::string& path);

}  // namespace maintscope
