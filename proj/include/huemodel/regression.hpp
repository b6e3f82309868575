#ifndef HUEMODEL_REGRESSION_HPP
#define HUEMODEL_REGRESSION_HPP

// Ordinary least squares with an intercept, and stepwise predictor selection
// by coefficient significance (forward entry, backward removal).

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace huemodel {

struct Dataset {
  Eigen::MatrixXd predictors;  // n x k
  Eigen::VectorXd target;      // n
  std::vector<std::string> names;

  Eigen::Index rows() const { return predictors.rows(); }
  Eigen::Index cols() const { return predictors.cols(); }

  /// n > k >= 1, matching sizes, finite entries. Throws ArgumentError.
  void validate() const;
};

struct OlsFit {
  std::vector<int> subset;        // predictor indices, ascending
  Eigen::VectorXd coefficients;   // one per subset entry
  double intercept{0};
  Eigen::VectorXd residuals;
  Eigen::VectorXd p_values;       // two-sided t-test per coefficient
  double intercept_p_value{1};
  double rss{0};
  double rms{0};
  int dof{0};
};

/// Least squares on [1 | X_subset] through a column-pivoted QR. An empty
/// subset fits the intercept alone. Throws SingularFitError naming the
/// collinear predictors when the augmented design is rank deficient.
OlsFit fit_ols(const Dataset& d, std::span<const int> subset);

struct StepwiseOptions {
  double p_enter{0.05};
  double p_remove{0.10};
};

struct StepwiseStep {
  enum class Action { Add, Remove };
  Action action;
  int predictor;
  double p_value;
};

struct StepwiseModel {
  std::vector<int> selected;   // ascending
  Eigen::VectorXd coefficients;
  double intercept{0};
  double rms{0};
  std::vector<double> p_values;
  std::vector<StepwiseStep> trace;
  int predictor_count{0};
  std::vector<std::string> names;
};

/// Starts from the intercept-only model. Each round adds the excluded
/// predictor with the smallest p-value below p_enter (ties to the lower
/// index), then removes included predictors whose p-value exceeds p_remove,
/// worst first. Stops when a round changes nothing, when a selection repeats,
/// or after 2k(k+1) steps. A residual sum of squares already at the floating
/// point noise floor admits no further entries.
StepwiseModel stepwise_fit(const Dataset& d, const StepwiseOptions& options = {});

/// intercept + sum of selected coefficients times responses.
double predict(const StepwiseModel& m, std::span<const double> responses);

/// Header: predictor names, then "hue_rad".
void write_dataset_csv(const Dataset& d, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

} // namespace huemodel

#endif
